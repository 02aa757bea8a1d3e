#pragma once
// Mean square of zeta on the critical line and its error term
//
//   E(t) = int_0^t |zeta(1/2+iu)|^2 du - t log(t/(2 pi)) - (2 gamma - 1) t.
//
// Two independent evaluators for |zeta(1/2+it)|^2 back everything else:
// Euler-Maclaurin summation (valid for every t >= 0, cost O(t)) and the
// Riemann-Siegel formula with four correction terms (cost O(sqrt t),
// absolute error around 1e-6 at t = 30, improving rapidly in t).  E(t)
// itself comes either from direct quadrature of the integral or from
// Atkinson's two-sum expansion, whose ingredient functions h, f, g and
// the inner cutoff N' are exposed individually for testing.

#include <complex>
#include <vector>

#include "divmom/arith.hpp"

namespace divmom::zeta {

// zeta(1/2 + it) via Euler-Maclaurin with tail corrections through B_20.
// Valid for any t >= 0.
std::complex<double> zeta_half_euler_maclaurin(double t);

// theta(t) = arg Gamma(1/4 + it/2) - (t/2) log pi, asymptotic expansion
// through the t^-5 term.  Requires t >= 1.
double rs_theta(double t);

// Hardy's Z(t) by the Riemann-Siegel main sum plus corrections C0..C3;
// |Z(t)| = |zeta(1/2+it)|.  Requires t >= 10.
double rs_z(double t);

// |zeta(1/2+it)|^2 by each route, and the dispatching front end (which
// uses Euler-Maclaurin below t = 200 and Riemann-Siegel above).
double zeta_sq_euler_maclaurin(double t);
double zeta_sq_riemann_siegel(double t);
double zeta_sq_half_line(double t);

// E(t) by composite 16-node Gauss-Legendre quadrature of the defining
// integral on panels of width 1/4.  Cost grows like t^{3/2}; t <= 5e4.
double e_exact(double t);

// Precomputed antiderivative on a uniform grid, so that a long sweep of
// E evaluations costs one pass instead of one integral per point.
// integral[i] approximates int_0^{i*spacing} |zeta(1/2+iu)|^2 du.
struct EGrid {
    double spacing = 0.1;
    std::vector<double> integral;

    double t_max() const {
        return integral.empty() ? 0.0 : spacing * static_cast<double>(integral.size() - 1);
    }
    // E(t) for 0 <= t <= t_max(): grid value at the nearest node below t
    // plus one exact quadrature panel for the remainder, so there is no
    // interpolation error.
    double e(double t) const;
};
EGrid build_e_grid(double t_max, double spacing = 0.1);

// Atkinson's expansion E(t) ~ S1 + S2.  S1 runs over n <= big_n with
//   g(t,n) = arsinh(sqrt(pi n / (2t)))
//   f(t,n) = 2 t g(t,n) + sqrt(2 pi n t + pi^2 n^2) - pi/4
//   h(t,n) = (-1)^n d(n) n^{-1/2} (t/(2 pi n) + 1/4)^{-1/4} / g(t,n)
// and S2 over n <= N'(t, big_n).  Identity: (d/dt) f(t,n) = 2 g(t,n).
double atkinson_g(double t, u64 n);
double atkinson_f(double t, u64 n);
double atkinson_h(double t, u64 n, const arith::DivisorTables& tables);
double atkinson_inner_cutoff(double t, double big_n);

// S1 + S2 with first-sum cutoff big_n, which must sit in [t/2, 4t];
// tables.limit must cover big_n.  Requires t >= 10.
double atkinson_e(double t, u64 big_n, const arith::DivisorTables& tables);

// Ingredients of the first Atkinson sum next to their large-t leading
// forms; fprime is the exact derivative 2 g(t,n) next to sqrt(2 pi n/t).
struct ExpansionCheck {
    double h_exact, h_leading;
    double f_exact, f_leading;
    double fprime_exact, fprime_leading;
};
ExpansionCheck expansion_check(double t, u64 n, const arith::DivisorTables& tables);

}  // namespace divmom::zeta
