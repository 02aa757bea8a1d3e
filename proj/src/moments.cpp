#include "divmom/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "divmom/constants.hpp"
#include "divmom/error_terms.hpp"
#include "divmom/quad.hpp"
#include "divmom/zeta.hpp"

namespace divmom::moments {

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double two_pi = 2.0 * pi;
const double nan_v = std::numeric_limits<double>::quiet_NaN();

struct Kahan {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

double pow_k(double v, int k) {
    const double v2 = v * v;
    switch (k) {
        case 1: return v;
        case 2: return v2;
        case 3: return v2 * v;
        default: return v2 * v2;
    }
}

enum class Variant { delta, delta_star, circle };

// Pieces per unit of x: jumps of the alternating sum sit at quarter integers.
u64 piece_density(Variant v) { return v == Variant::delta_star ? 4 : 1; }

// Signed jump contribution of the summatory function at integer m.
// delta:      d(m)        (prefix = D(m))
// delta_star: (-1)^m d(m) (prefix = alternating sum; the error term halves it)
// circle:     r2(m)       (prefix + 1 = lattice points in the closed disk)
void block_jumps(Variant v, u64 lo, u64 hi, std::vector<u32>& dscratch,
                 std::vector<i64>& out) {
    if (v == Variant::circle) {
        arith::r2_counts_block(lo, hi, out);
        return;
    }
    arith::divisor_counts_block(lo, hi, dscratch);
    out.assign(hi - lo, 0);
    for (u64 m = lo; m < hi; ++m) {
        i64 val = static_cast<i64>(dscratch[m - lo]);
        if (v == Variant::delta_star && (m & 1)) val = -val;
        out[m - lo] = val;
    }
}

constexpr u64 chunk_pieces = 65536;  // fixed: parallel layout never moves it

// integral_a^b (error term)^k dx by per-piece Gauss-Legendre.  Deterministic
// under any thread count: chunk boundaries depend only on (a, b, variant).
double integrate_err_pow(Variant var, int k, double a, double b) {
    const u64 den = piece_density(var);
    const double dden = static_cast<double>(den);
    const u64 j0 = static_cast<u64>(std::floor(a * dden));
    const u64 j1 = static_cast<u64>(std::ceil(b * dden)) - 1;
    if (j0 < 1 || j1 < j0) throw std::invalid_argument("integrate: empty range");
    const u64 n_pieces = j1 - j0 + 1;
    if (n_pieces > 44000000ull)
        throw resource_limit_error("moment integral: piece budget exceeded");
    const u64 n_chunks = (n_pieces + chunk_pieces - 1) / chunk_pieces;

    // serial sieve pass: summatory prefix at every chunk boundary
    std::vector<i64> base(n_chunks);
    {
        i64 run = (var == Variant::circle) ? 1 : 0;  // origin lattice point
        u64 covered = 0;
        std::vector<u32> dscr;
        std::vector<i64> jumps;
        for (u64 c = 0; c < n_chunks; ++c) {
            const u64 js = j0 + c * chunk_pieces;
            while (covered < js - 1) {
                const u64 blo = covered + 1;
                const u64 bhi = std::min(js - 1, blo + chunk_pieces - 1);
                block_jumps(var, blo, bhi + 1, dscr, jumps);
                for (i64 v : jumps) run += v;
                covered = bhi;
            }
            base[c] = run;
        }
    }

    const double gamma2m1 = 2.0 * error_terms::euler_gamma - 1.0;
    std::vector<double> part(n_chunks, 0.0);

#pragma omp parallel for schedule(dynamic)
    for (i64 ci = 0; ci < static_cast<i64>(n_chunks); ++ci) {
        const u64 c = static_cast<u64>(ci);
        const u64 js = j0 + c * chunk_pieces;
        const u64 je = std::min(j1, js + chunk_pieces - 1);
        std::vector<u32> dscr;
        std::vector<i64> jumps;
        block_jumps(var, js, je + 1, dscr, jumps);
        i64 run = base[c];
        Kahan acc;
        for (u64 j = js; j <= je; ++j) {
            run += jumps[j - js];
            const double lo_x = std::max(a, static_cast<double>(j) / dden);
            const double hi_x = std::min(b, static_cast<double>(j + 1) / dden);
            if (hi_x <= lo_x) continue;
            double cval = static_cast<double>(run);
            if (var == Variant::delta_star) cval *= 0.5;
            double piece;
            if (var == Variant::circle) {
                piece = quad::panel(quad::gl8, lo_x, hi_x, [&](double x) {
                    return pow_k(cval - pi * x, k);
                });
            } else {
                piece = quad::panel(quad::gl8, lo_x, hi_x, [&](double x) {
                    return pow_k(cval - x * (std::log(x) + gamma2m1), k);
                });
            }
            acc.add(piece);
        }
        part[c] = acc.sum;
    }

    Kahan total;
    for (double p : part) total.add(p);
    return total.sum;
}

Variant variant_of(Target t) {
    switch (t) {
        case Target::delta: return Variant::delta;
        case Target::delta_star: return Variant::delta_star;
        case Target::circle: return Variant::circle;
        default: throw std::invalid_argument("moment_delta: target has no divisor variant");
    }
}

// Common chunked integral of f^k over [2, t_max] on 0.1-wide pieces, used by
// both E routes that sample E pointwise.
template <typename F>
double integrate_e_pow(int k, double t_max, F&& eval) {
    const double width = 0.1;
    const u64 n_pieces = static_cast<u64>(std::ceil((t_max - 2.0) / width));
    const u64 chunk = 2048;
    const u64 n_chunks = (n_pieces + chunk - 1) / chunk;
    std::vector<double> part(n_chunks, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (i64 ci = 0; ci < static_cast<i64>(n_chunks); ++ci) {
        const u64 c = static_cast<u64>(ci);
        Kahan acc;
        const u64 pend = std::min(n_pieces, (c + 1) * chunk);
        for (u64 p = c * chunk; p < pend; ++p) {
            const double lo = 2.0 + width * static_cast<double>(p);
            const double hi = std::min(t_max, lo + width);
            if (hi <= lo) continue;
            acc.add(quad::panel(quad::gl8, lo, hi,
                                [&](double t) { return pow_k(eval(t), k); }));
        }
        part[c] = acc.sum;
    }
    Kahan total;
    for (double p : part) total.add(p);
    return total.sum;
}

// The prediction constants and their uncertainty hints, computed once.  The
// c2 hint anchors the tail completion at the enumeration budget cap, where
// the completion sequence has tightened the furthest.
struct PredictionConstants {
    double c2;       // truncated quadruple sum at Y = 10^4
    double c2_hint;  // (completed c2 at Y = 2*10^5  -  c2) / c2
    double c1;       // truncated triple sum with limits 300
    double c1_hint;  // its built-in truncation heuristic
};

const PredictionConstants& prediction_constants() {
    static const PredictionConstants pc = [] {
        auto tables = arith::build_tables(200000);
        const auto pin = constants::c2_partial(10000, tables);
        const auto full = constants::c2_extrapolated(200000, tables);
        const auto c1 = constants::c1_partial(constants::C1Limits{300, 300, 300});
        return PredictionConstants{pin.value, (full.value - pin.value) / pin.value,
                                   c1.value, c1.tail_hint};
    }();
    return pc;
}

} // namespace

double moment_delta(int k, double t_max, Target variant) {
    if (k < 1 || k > 4) throw std::invalid_argument("moment_delta: k must be 1..4");
    if (!std::isfinite(t_max) || t_max <= 2.0)
        throw std::invalid_argument("moment_delta: t_max must exceed 2");
    const Variant var = variant_of(variant);
    const double cap = (var == Variant::delta_star) ? 1.0e7 : 2.0e7;
    if (t_max > cap) throw resource_limit_error("moment_delta: t_max beyond budget");
    return integrate_err_pow(var, k, 2.0, t_max);
}

double moment_E(int k, double t_max, ERoute route) {
    if (k != 2 && k != 4) throw std::invalid_argument("moment_E: k must be 2 or 4");
    if (!std::isfinite(t_max) || t_max <= 2.0)
        throw std::invalid_argument("moment_E: t_max must exceed 2");
    switch (route) {
        case ERoute::exact: {
            if (t_max > 2.0e4) throw resource_limit_error("moment_E: exact route beyond budget");
            auto grid = zeta::build_e_grid(t_max + 0.2);
            return integrate_e_pow(k, t_max, [&](double t) { return grid.e(t); });
        }
        case ERoute::atkinson: {
            if (t_max > 1.0e5) throw resource_limit_error("moment_E: atkinson route beyond budget");
            const double lo_cut = 50.0;
            auto grid = zeta::build_e_grid(std::min(t_max, lo_cut) + 0.2);
            auto tables = arith::build_tables(static_cast<u64>(std::ceil(t_max)) + 2);
            return integrate_e_pow(k, t_max, [&](double t) {
                if (t < lo_cut) return grid.e(t);
                return zeta::atkinson_e(t, static_cast<u64>(std::ceil(t)), tables);
            });
        }
        default: {
            if (t_max > 1.0e7) throw resource_limit_error("moment_E: proxy route beyond budget");
            const double scale = std::pow(two_pi, k + 1);
            return scale * integrate_err_pow(Variant::delta_star, k, 2.0 / two_pi,
                                             t_max / two_pi);
        }
    }
}

PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& value) {
    if (t.size() != value.size() || t.size() < 3)
        throw std::invalid_argument("fit_power_law: need >= 3 matching samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !(value[i] > 0.0))
            throw std::invalid_argument("fit_power_law: samples must be positive");
        const double x = std::log(t[i]), y = std::log(value[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_power_law: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    return {slope, std::exp(intercept)};
}

double predicted_main_term(Target target, int k, double t) {
    switch (target) {
        case Target::delta:
        case Target::delta_star:
            if (k == 2) return constants::tong_constant() * std::pow(t, 1.5);
            if (k == 3 && target == Target::delta)
                return 3.0 * prediction_constants().c1 / (28.0 * pi * pi * pi) *
                       std::pow(t, 1.75);
            if (k == 4)
                return 3.0 * prediction_constants().c2 / (64.0 * pi * pi * pi * pi) * t * t;
            return nan_v;
        case Target::circle:
            return nan_v;
        default:
            if (k == 2)
                return std::pow(two_pi, 1.5) * constants::tong_constant() * std::pow(t, 1.5);
            if (k == 4) return 3.0 * prediction_constants().c2 / (8.0 * pi) * t * t;
            return nan_v;
    }
}

double prediction_tail_hint(Target target, int k) {
    switch (target) {
        case Target::delta:
        case Target::delta_star:
            if (k == 2) return 0.0;
            if (k == 3 && target == Target::delta) return prediction_constants().c1_hint;
            if (k == 4) return prediction_constants().c2_hint;
            return nan_v;
        case Target::circle:
            return nan_v;
        default:
            if (k == 2) return 0.0;
            if (k == 4) return prediction_constants().c2_hint;
            return nan_v;
    }
}

MomentReport asymptotic_report(Target target, int k, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("asymptotic_report: empty grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 2.0)) throw std::invalid_argument("asymptotic_report: grid points must exceed 2");
        if (i > 0 && t_grid[i] <= t_grid[i - 1])
            throw std::invalid_argument("asymptotic_report: grid must increase");
    }
    if (target == Target::zeta_e) {
        if (k != 2 && k != 4)
            throw std::invalid_argument("asymptotic_report: zeta_e needs k in {2,4}");
    } else if (k < 1 || k > 4) {
        throw std::invalid_argument("asymptotic_report: k must be 1..4");
    }

    MomentReport rep;
    rep.target = target;
    rep.k = k;
    rep.t_grid = t_grid;
    rep.tail_hint = prediction_tail_hint(target, k);
    for (double t : t_grid) {
        const double v = (target == Target::zeta_e)
                             ? moment_E(k, t, ERoute::delta_star_proxy)
                             : moment_delta(k, t, target);
        const double p = predicted_main_term(target, k, t);
        rep.values.push_back(v);
        rep.predicted.push_back(p);
        rep.ratios.push_back(v / p);
    }

    std::vector<double> ft, fv;
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        if (rep.values[i] > 0.0) {
            ft.push_back(t_grid[i]);
            fv.push_back(rep.values[i]);
        }
    if (ft.size() >= 3) {
        auto fit = fit_power_law(ft, fv);
        rep.fitted_exponent = fit.exponent;
        rep.fitted_amplitude = fit.amplitude;
    } else {
        rep.fitted_exponent = nan_v;
        rep.fitted_amplitude = nan_v;
    }
    return rep;
}

} // namespace divmom::moments
