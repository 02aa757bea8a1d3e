#include "divmom/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "divmom/error_terms.hpp"
#include "divmom/quad.hpp"

namespace divmom::zeta {

namespace {

constexpr double pi = 3.14159265358979323846264338327950288;
constexpr double two_pi = 6.28318530717958647692528676655900577;
constexpr double inv_sqrt2 = 0.70710678118654752440084436210484904;

inline void kahan_add(double& sum, double& comp, double term) {
    double y = term - comp;
    double u = sum + y;
    comp = (u - sum) - y;
    sum = u;
}

// B_{2k} / (2k)! for k = 1..10, the tail coefficients of Euler-Maclaurin.
constexpr double b2k_over_fact[10] = {
    8.3333333333333333e-02,   // B2/2!   = 1/12
    -1.3888888888888889e-03,  // B4/4!   = -1/720
    3.3068783068783071e-05,   // B6/6!
    -8.2671957671957675e-07,  // B8/8!
    2.0876756987868100e-08,   // B10/10!
    -5.2841901386874932e-10,  // B12/12!
    1.3382536530684679e-11,   // B14/14!
    -3.3896802963225827e-13,  // B16/16!
    8.5860620562778452e-15,   // B18/18!
    -2.1748686985580619e-16,  // B20/20!
};

}  // namespace

std::complex<double> zeta_half_euler_maclaurin(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("zeta_half_euler_maclaurin: t must be finite and >= 0");
    const std::complex<double> s(0.5, t);
    // With M ~ 2.6 t / (2 pi) the Bernoulli tail shrinks by (|s|/2 pi M)^2
    // ~ 0.15 per term, so ten terms put the truncation near 1e-12.
    const u64 big_m = static_cast<u64>(2.6 * t / two_pi) + 20;
    double re = 0.0, im = 0.0, re_c = 0.0, im_c = 0.0;
    for (u64 n = 1; n <= big_m; ++n) {
        const double ln_n = std::log(static_cast<double>(n));
        const double r = 1.0 / std::sqrt(static_cast<double>(n));
        const double ang = t * ln_n;
        kahan_add(re, re_c, r * std::cos(ang));
        kahan_add(im, im_c, -r * std::sin(ang));
    }
    std::complex<double> sum(re, im);

    const double m = static_cast<double>(big_m);
    const double ln_m = std::log(m);
    const std::complex<double> m_minus_s = std::polar(1.0 / std::sqrt(m), -t * ln_m);
    sum += std::polar(std::sqrt(m), -t * ln_m) / (s - 1.0);  // integral tail
    sum -= 0.5 * m_minus_s;                                  // boundary term

    // sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * M^{-s-2k+1}
    std::complex<double> rising = s;
    std::complex<double> m_shift = m_minus_s / m;  // M^{-s-1}
    for (int k = 1; k <= 10; ++k) {
        sum += b2k_over_fact[k - 1] * rising * m_shift;
        rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
        m_shift /= m * m;
    }
    return sum;
}

double rs_theta(double t) {
    if (!(t >= 1.0)) throw std::invalid_argument("rs_theta: t must be >= 1");
    const double u = 1.0 / t;
    const double u2 = u * u;
    return 0.5 * t * std::log(t / two_pi) - 0.5 * t - 0.125 * pi +
           u * (1.0 / 48.0 + u2 * (7.0 / 5760.0 + u2 * (31.0 / 80640.0)));
}

// ---------------------------------------------------------------------
// Riemann-Siegel correction terms C0..C3.  All are combinations of
// derivatives of the entire function
//     psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)
// whose denominator zeros at p = 1/4 + k/2 are cancelled by the
// numerator.  Derivatives come from trapezoid Cauchy integrals on a
// circle around p; the circle radius is picked from three candidates so
// the two real-axis crossings stay at least 0.04 away from the
// removable points, keeping the quotient well conditioned.  Values are
// cached on a uniform grid and read back by cubic interpolation.

namespace {

std::complex<double> psi_complex(std::complex<double> z) {
    const std::complex<double> num = std::cos(two_pi * (z * z - z - 0.0625));
    const std::complex<double> den = std::cos(two_pi * z);
    return num / den;
}

double dist_to_removable(double x) {
    double u = std::fmod(x - 0.25, 0.5);
    if (u < 0.0) u += 0.5;
    return std::min(u, 0.5 - u);
}

void psi_derivs(double p0, int k_max, double* out) {
    static constexpr double radii[3] = {0.29, 0.37, 0.45};
    double r = radii[0], best = -1.0;
    for (double cand : radii) {
        const double d =
            std::min(dist_to_removable(p0 + cand), dist_to_removable(p0 - cand));
        if (d > best) {
            best = d;
            r = cand;
        }
    }
    constexpr int ns = 64;
    std::complex<double> sample[ns];
    for (int j = 0; j < ns; ++j) {
        const double phi = two_pi * j / ns;
        sample[j] = psi_complex(
            std::complex<double>(p0 + r * std::cos(phi), r * std::sin(phi)));
    }
    double k_fact = 1.0, r_pow = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < ns; ++j) {
            const double ang = two_pi * j * k / ns;
            acc += sample[j] * std::complex<double>(std::cos(ang), -std::sin(ang));
        }
        out[k] = k_fact / (ns * r_pow) * acc.real();
        k_fact *= static_cast<double>(k + 1);
        r_pow *= r;
    }
}

struct RsTables {
    static constexpr int n_cells = 4096;  // cells on [0, 1)
    static constexpr int pad = 2;         // extra nodes so the cubic never clips
    double h = 1.0 / n_cells;
    std::vector<double> c[4];

    RsTables() {
        const int n_nodes = n_cells + 2 * pad + 1;
        for (auto& v : c) v.resize(static_cast<size_t>(n_nodes));
        const double pi2 = pi * pi;
        const double pi4 = pi2 * pi2;
        const double pi6 = pi4 * pi2;
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n_nodes; ++j) {
            const double p0 = (j - pad) * h;
            double d[10];
            psi_derivs(p0, 9, d);
            c[0][j] = d[0];
            c[1][j] = -d[3] / (96.0 * pi2);
            c[2][j] = d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4);
            c[3][j] = -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) -
                      d[9] / (5308416.0 * pi6);
        }
    }

    double eval(int which, double p) const {
        const double u = p / h;
        int i = static_cast<int>(std::floor(u));
        i = std::max(0, std::min(i, n_cells - 1));
        const double xi = u - i;
        const int b = i + pad;
        const auto& v = c[which];
        const double w0 = -xi * (xi - 1.0) * (xi - 2.0) / 6.0;
        const double w1 = (xi * xi - 1.0) * (xi - 2.0) / 2.0;
        const double w2 = -xi * (xi + 1.0) * (xi - 2.0) / 2.0;
        const double w3 = xi * (xi * xi - 1.0) / 6.0;
        return w0 * v[b - 1] + w1 * v[b] + w2 * v[b + 1] + w3 * v[b + 2];
    }
};

const RsTables& rs_tables() {
    static const RsTables tables;
    return tables;
}

}  // namespace

double rs_z(double t) {
    if (!(t >= 10.0)) throw std::invalid_argument("rs_z: t must be >= 10");
    const double a = std::sqrt(t / two_pi);
    const u64 big_n = static_cast<u64>(a);
    const double p = a - static_cast<double>(big_n);
    const double theta = rs_theta(t);

    double sum = 0.0, comp = 0.0;
    for (u64 n = 1; n <= big_n; ++n) {
        const double nn = static_cast<double>(n);
        kahan_add(sum, comp, std::cos(theta - t * std::log(nn)) / std::sqrt(nn));
    }

    const RsTables& tab = rs_tables();
    const double inv_a = 1.0 / a;
    const double corr =
        tab.eval(0, p) +
        inv_a * (tab.eval(1, p) + inv_a * (tab.eval(2, p) + inv_a * tab.eval(3, p)));
    const double sign = (big_n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{N+1}
    return 2.0 * sum + sign * std::pow(two_pi / t, 0.25) * corr;
}

double zeta_sq_euler_maclaurin(double t) {
    return std::norm(zeta_half_euler_maclaurin(t));
}

double zeta_sq_riemann_siegel(double t) {
    const double z = rs_z(t);
    return z * z;
}

double zeta_sq_half_line(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("zeta_sq_half_line: t must be finite and >= 0");
    return t < 200.0 ? zeta_sq_euler_maclaurin(t) : zeta_sq_riemann_siegel(t);
}

double e_exact(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("e_exact: t must be finite and >= 0");
    if (t > 5e4)
        throw resource_limit_error("e_exact: t above 5e4; use build_e_grid or Atkinson");
    if (t == 0.0) return 0.0;

    const double width = 0.25;
    const i64 n_panels = static_cast<i64>(std::ceil(t / width - 1e-12));
    std::vector<double> part(static_cast<size_t>(n_panels));
#pragma omp parallel for schedule(static)
    for (i64 i = 0; i < n_panels; ++i) {
        const double a = width * static_cast<double>(i);
        const double b = std::min(t, a + width);
        part[static_cast<size_t>(i)] = quad::panel(quad::gl16, a, b, zeta_sq_half_line);
    }
    // fixed-order fold keeps the result identical for any thread count
    double sum = 0.0, comp = 0.0;
    for (double v : part) kahan_add(sum, comp, v);

    const double main_term =
        t * std::log(t / two_pi) + (2.0 * error_terms::euler_gamma - 1.0) * t;
    return sum - main_term;
}

double EGrid::e(double t) const {
    if (!(t >= 0.0) || t > t_max() + 1e-9)
        throw std::invalid_argument("EGrid::e: t outside the grid range");
    size_t i = static_cast<size_t>(t / spacing);
    if (i >= integral.size()) i = integral.size() - 1;
    const double base = spacing * static_cast<double>(i);
    double value = integral[i];
    if (t > base) value += quad::panel(quad::gl16, base, t, zeta_sq_half_line);
    if (t > 0.0)
        value -= t * std::log(t / two_pi) + (2.0 * error_terms::euler_gamma - 1.0) * t;
    return value;
}

EGrid build_e_grid(double t_max, double spacing) {
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw std::invalid_argument("build_e_grid: t_max must be positive");
    if (!(spacing > 0.0) || spacing > 1.0)
        throw std::invalid_argument("build_e_grid: spacing must lie in (0, 1]");
    if (t_max > 6e4) throw resource_limit_error("build_e_grid: t_max above 6e4");

    const i64 steps = static_cast<i64>(std::ceil(t_max / spacing - 1e-12));
    std::vector<double> part(static_cast<size_t>(steps));
#pragma omp parallel for schedule(static)
    for (i64 i = 0; i < steps; ++i) {
        const double a = spacing * static_cast<double>(i);
        part[static_cast<size_t>(i)] =
            quad::panel(quad::gl16, a, a + spacing, zeta_sq_half_line);
    }
    EGrid grid;
    grid.spacing = spacing;
    grid.integral.resize(static_cast<size_t>(steps) + 1);
    grid.integral[0] = 0.0;
    double sum = 0.0, comp = 0.0;
    for (i64 i = 0; i < steps; ++i) {
        kahan_add(sum, comp, part[static_cast<size_t>(i)]);
        grid.integral[static_cast<size_t>(i) + 1] = sum;
    }
    return grid;
}

double atkinson_g(double t, u64 n) {
    if (!(t > 0.0) || n == 0) throw std::invalid_argument("atkinson_g: need t > 0, n >= 1");
    return std::asinh(std::sqrt(pi * static_cast<double>(n) / (2.0 * t)));
}

double atkinson_f(double t, u64 n) {
    const double nn = static_cast<double>(n);
    return 2.0 * t * atkinson_g(t, n) +
           std::sqrt(two_pi * nn * t + pi * pi * nn * nn) - 0.25 * pi;
}

double atkinson_h(double t, u64 n, const arith::DivisorTables& tables) {
    if (n == 0 || n > tables.limit)
        throw std::invalid_argument("atkinson_h: n outside divisor tables");
    const double nn = static_cast<double>(n);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * static_cast<double>(tables.d[n]) / std::sqrt(nn) *
           std::pow(t / (two_pi * nn) + 0.25, -0.25) / atkinson_g(t, n);
}

double atkinson_inner_cutoff(double t, double big_n) {
    if (!(t > 0.0) || !(big_n >= 0.0))
        throw std::invalid_argument("atkinson_inner_cutoff: need t > 0, N >= 0");
    const double x = t / two_pi;
    // stable form of x + N/2 - sqrt(N^2/4 + N x); the naive difference
    // cancels badly once N >> x
    return x * x / (x + 0.5 * big_n + std::sqrt(0.25 * big_n * big_n + big_n * x));
}

double atkinson_e(double t, u64 big_n, const arith::DivisorTables& tables) {
    if (!(t >= 10.0)) throw std::invalid_argument("atkinson_e: t must be >= 10");
    const double nb = static_cast<double>(big_n);
    if (!(nb >= 0.5 * t && nb <= 4.0 * t))
        throw std::invalid_argument("atkinson_e: cutoff must lie in [t/2, 4t]");
    if (big_n > tables.limit)
        throw std::invalid_argument("atkinson_e: divisor tables smaller than cutoff");

    const double x = t / two_pi;
    double s1 = 0.0, c1 = 0.0;
    for (u64 n = 1; n <= big_n; ++n) {
        const double nn = static_cast<double>(n);
        const double g = std::asinh(std::sqrt(pi * nn / (2.0 * t)));
        const double f =
            2.0 * t * g + std::sqrt(two_pi * nn * t + pi * pi * nn * nn) - 0.25 * pi;
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        const double h = sign * static_cast<double>(tables.d[n]) / std::sqrt(nn) *
                         std::pow(x / nn + 0.25, -0.25) / g;
        kahan_add(s1, c1, h * std::cos(f));
    }

    const double cutoff2 = atkinson_inner_cutoff(t, nb);
    double s2 = 0.0, c2 = 0.0;
    for (u64 n = 1; static_cast<double>(n) <= cutoff2; ++n) {
        const double nn = static_cast<double>(n);
        const double lg = std::log(x / nn);
        kahan_add(s2, c2, static_cast<double>(tables.d[n]) / std::sqrt(nn) / lg *
                              std::cos(t * lg - t + 0.25 * pi));
    }
    return inv_sqrt2 * s1 - 2.0 * s2;
}

ExpansionCheck expansion_check(double t, u64 n, const arith::DivisorTables& tables) {
    const double nn = static_cast<double>(n);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double g = atkinson_g(t, n);
    ExpansionCheck out;
    out.h_exact = atkinson_h(t, n, tables);
    out.h_leading = sign * static_cast<double>(tables.d[n]) * std::pow(2.0, 0.75) *
                    std::pow(pi, -0.25) * std::pow(nn, -0.75) * std::pow(t, 0.25);
    out.f_exact = atkinson_f(t, n);
    out.f_leading = std::pow(2.0, 1.5) * std::sqrt(pi * nn * t) - 0.25 * pi;
    out.fprime_exact = 2.0 * g;
    out.fprime_leading = std::sqrt(two_pi * nn / t);
    return out;
}

}  // namespace divmom::zeta
