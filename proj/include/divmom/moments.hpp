#pragma once
// Power-moment integrals of the error terms and comparison against their
// conjectured / proved main terms.
//
// The integrands are piecewise smooth: between consecutive jumps of the
// underlying summatory function the error term is  C - main(x)  with C a
// constant.  Jumps sit at integers for Delta(x) and P(x) and at quarter
// integers for the alternating Delta*(x), so every piece is integrated by
// 8-node Gauss-Legendre (exact far beyond the smoothness actually needed)
// and the constants C advance by segmented sieves, never by re-summation.
//
// Parallel layout: the piece range is cut into fixed-size chunks, each chunk
// is summed serially with compensation, chunk totals are folded in index
// order.  Results are therefore bit-identical for every worker count.

#include <vector>

#include "divmom/arith.hpp"

namespace divmom::moments {

enum class Target { delta, delta_star, circle, zeta_e };
enum class ERoute { exact, atkinson, delta_star_proxy };

// integral_2^T (error term)^k dx for the divisor-type targets
// (delta, delta_star, circle).  k in 1..4; k = 1 exists for diagnostics
// against the per-piece closed-form antiderivative.
// Budget: T <= 2*10^7 (delta, circle), T <= 10^7 (delta_star, whose pieces
// are four per unit).  Beyond that: resource_limit_error.
double moment_delta(int k, double t_max, Target variant);

// integral_2^T E(t)^k dt, k in {2,4}.
//   exact             E from the mean-square prefix grid (spacing 0.1,
//                     zeta sampled on the half line); T <= 2*10^4
//   atkinson          E from the truncated sum with N = ceil(t) (grid
//                     fallback below t = 50); T <= 10^5, cost grows ~ T^2
//   delta_star_proxy  (2pi)^{k+1} integral of (Delta*)^k over [2/2pi, T/2pi],
//                     using E(t) ~ 2pi Delta*(t/2pi); T <= 10^7
double moment_E(int k, double t_max, ERoute route);

struct PowerFit {
    double exponent = 0.0;   // slope of log value against log T
    double amplitude = 0.0;  // exp(intercept)
};

// Least squares on (log T, log value).  Needs >= 3 samples, positive
// throughout; otherwise invalid_argument.
PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& value);

// Main term the moment is expected to follow, NaN when no constant is
// available for the pair:
//   delta        k=2: tong * T^{3/2}     k=3: (3 c1 / 28 pi^3) T^{7/4}
//                k=4: (3 c2 / 64 pi^4) T^2
//   delta_star   k=2 and k=4: same constants as delta (the alternating signs
//                square away on the diagonal, and the fourth-moment constant
//                transfers through E ~ 2pi Delta*(t/2pi))
//   circle       none (the fourth-moment constant is not pinned down)
//   zeta_e       k=2: (2pi)^{3/2} tong * T^{3/2}   k=4: (3 c2 / 8 pi) T^2
// c2 is the truncated solution-set sum at Y = 10^4, c1 the triple sum with
// limits 300; both are computed once and cached.
double predicted_main_term(Target target, int k, double t);

// Relative uncertainty of the constant inside predicted_main_term, carried
// next to every ratio so a reader can judge how much of a ratio's drift is
// truncation deficit: for the quartic constant the tail completion gap
// (c2_extrapolated at the enumeration cap vs the truncated value, ~0.45),
// for the cubic constant the built-in truncation heuristic (~0.12), zero
// for the exact mean-square constant, NaN exactly when predicted_main_term
// has no constant for the pair.
double prediction_tail_hint(Target target, int k);

struct MomentReport {
    Target target = Target::delta;
    int k = 0;
    std::vector<double> t_grid;
    std::vector<double> values;     // integral_2^T (...)^k
    std::vector<double> predicted;  // main term, NaN when unavailable
    std::vector<double> ratios;     // values / predicted
    double tail_hint = 0.0;         // prediction_tail_hint(target, k)
    double fitted_exponent = 0.0;   // NaN when < 3 positive samples
    double fitted_amplitude = 0.0;
};

// One moment sweep over an increasing T grid.  zeta_e goes through the
// delta_star_proxy route so the sweep stays affordable at large T.
MomentReport asymptotic_report(Target target, int k, const std::vector<double>& t_grid);

} // namespace divmom::moments
