#include "divmom/voronoi.hpp"

#include "divmom/constants.hpp"
#include "divmom/dd.hpp"

#include <cmath>
#include <complex>

namespace divmom::voronoi {

namespace {

const double pi = 3.14159265358979323846;

// Phase 4*pi*sqrt(n*x) reduced mod 2*pi.  Up to n*x = 1e10 the double sqrt
// keeps the phase good to ~1e-10 rad; past that, carry sqrt(n*x) in
// double-double and reduce 2*sqrt(n*x) mod 1 before scaling by 2*pi.
double phase_mod_2pi(u64 n, double x) {
    double nx = static_cast<double>(n) * x;
    if (nx <= 1e10) return std::fmod(4.0 * pi * std::sqrt(nx), 2.0 * pi);
    // x enters the moment pipelines as an exact piece boundary; splitting the
    // product n*x through two_prod keeps everything faithful.
    dd prod = dd_mul(dd{static_cast<double>(n), 0.0}, dd{x, 0.0});
    double s0 = std::sqrt(dd_to_double(prod));
    // one Newton step in dd: s = s0 + (prod - s0^2) / (2 s0)
    dd err = dd_sub(prod, dd_mul(dd{s0, 0.0}, dd{s0, 0.0}));
    dd s = dd_add(dd{s0, 0.0}, dd{err.hi / (2.0 * s0), 0.0});
    dd f = dd_frac(dd_add(s, s)); // frac(2 sqrt(nx)) in [0,1)
    return dd_to_double(dd_mul(dd_2pi, f));
}

double series(double x, u64 n_terms, const arith::DivisorTables& t, bool alternating) {
    if (!(x >= 1.0)) throw std::invalid_argument("voronoi sum: x must be >= 1");
    if (n_terms == 0) throw std::invalid_argument("voronoi sum: need at least one term");
    if (n_terms > t.limit) throw std::invalid_argument("voronoi sum: tables too small for cutoff");
    const double quarter_pi = pi / 4.0;
    double acc = 0.0, comp = 0.0; // Kahan; the terms decay slowly and alternate
    for (u64 n = 1; n <= n_terms; ++n) {
        double term = t.d[n] * std::pow(static_cast<double>(n), -0.75) *
                      std::cos(phase_mod_2pi(n, x) - quarter_pi);
        if (alternating && (n % 2 == 1)) term = -term;
        double yk = term - comp;
        double tk = acc + yk;
        comp = (tk - acc) - yk;
        acc = tk;
    }
    return std::pow(x, 0.25) / (pi * std::sqrt(2.0)) * acc;
}

} // namespace

u64 default_cutoff(double x) {
    if (!(x >= 1.0)) throw std::invalid_argument("default_cutoff: x must be >= 1");
    // ceil(x^{3/4}), except that values a hair above an integer (pure pow()
    // rounding, e.g. x = 10^4) snap back down.
    double p = std::pow(x, 0.75);
    double n = std::floor(p);
    if (p - n > 1e-8 * p) n += 1.0;
    return static_cast<u64>(std::max(1.0, n));
}

double voronoi_delta(double x, u64 n_terms, const arith::DivisorTables& t) {
    return series(x, n_terms, t, false);
}

double voronoi_delta_star(double x, u64 n_terms, const arith::DivisorTables& t) {
    return series(x, n_terms, t, true);
}

QuadTerms quad_decomposition_terms(double x, u32 y_cutoff, const arith::DivisorTables& t) {
    if (!(x >= 1.0)) throw std::invalid_argument("quad_decomposition_terms: x must be >= 1");
    if (y_cutoff == 0) throw std::invalid_argument("quad_decomposition_terms: y_cutoff must be >= 1");
    if (y_cutoff > 200) throw resource_limit_error("quad_decomposition_terms: y_cutoff beyond budget");
    if (y_cutoff > t.limit) throw std::invalid_argument("quad_decomposition_terms: tables too small");

    // z = sum w_n e^{i theta_n}.  The three oscillating pieces are exact
    // trigonometric rearrangements of powers of z:
    //   sum over 2+2 signs   = |z|^4            (then split off the resonant set)
    //   sum over 3+1 signs   = Im(z^3 conj z)
    //   all-plus             = Re(z^4)
    std::complex<double> z(0.0, 0.0);
    for (u64 n = 1; n <= y_cutoff; ++n) {
        double w = t.d[n] * std::pow(static_cast<double>(n), -0.75);
        double ph = phase_mod_2pi(n, x);
        z += std::complex<double>(w * std::cos(ph), w * std::sin(ph));
    }
    double zn2 = std::norm(z);
    std::complex<double> z2 = z * z;

    // Resonant sum: the exact-solution enumeration, phases identically zero.
    double resonant = constants::c2_partial(y_cutoff, t).value;

    QuadTerms q;
    q.s1 = 0.375 * x * resonant;
    q.s2 = 0.375 * x * zn2 * zn2 - q.s1;
    q.s3 = 0.5 * x * zn2 * std::imag(z2);
    q.s4 = -0.125 * x * std::real(z2 * z2);
    return q;
}

} // namespace divmom::voronoi
