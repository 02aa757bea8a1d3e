#include "divmom/error_terms.hpp"

#include <cmath>

namespace divmom::error_terms {

double euler_gamma_recomputed() {
    // gamma = H_M - log M - 1/(2M) + sum_k B_{2k}/(2k M^{2k}), truncated where
    // the terms drop below 1e-18.  M = 64 is far more than enough.
    const int M = 64;
    long double h = 0.0L;
    for (int n = 1; n <= M; ++n) h += 1.0L / n;
    long double m = M;
    long double g = h - std::log(m) - 1.0L / (2.0L * m);
    const long double b2k[5] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66};
    long double mp = m * m;
    for (int k = 1; k <= 5; ++k) {
        g += b2k[k - 1] / (2 * k * mp);
        mp *= m * m;
    }
    return static_cast<double>(g);
}

void validate_euler_gamma() {
    static const bool ok = [] {
        return std::fabs(euler_gamma - euler_gamma_recomputed()) < 1e-12;
    }();
    if (!ok) throw std::logic_error("euler gamma literal failed revalidation");
}

namespace {

// x(log x + 2*gamma - 1) in extended precision.
inline long double main_term(long double x) {
    return x * (std::log(x) + (2.0L * (long double)euler_gamma - 1.0L));
}

} // namespace

double delta(double x) {
    if (!(x >= 1.0)) throw std::domain_error("delta: x must be >= 1");
    validate_euler_gamma();
    i64 dsum = divmom::arith::divisor_summatory(static_cast<u64>(std::floor(x)));
    return static_cast<double>((long double)dsum - main_term(x));
}

double delta_star(double x) {
    if (!(x >= 0.25)) throw std::domain_error("delta_star: x must be >= 1/4");
    validate_euler_gamma();
    // 4x is exact in binary arithmetic, so the floor below is the true
    // integer cutoff of sum_{n <= 4x}.
    i64 alt = divmom::arith::alternating_divisor_summatory(static_cast<u64>(std::floor(4.0 * x)));
    return static_cast<double>(0.5L * (long double)alt - main_term(x));
}

double circle_error(double x) {
    if (!(x >= 0.0)) throw std::domain_error("circle_error: x must be >= 0");
    i64 lattice = divmom::arith::lattice_points_in_disk(x);
    const long double pi_l = 3.14159265358979323846264338327950288L;
    return static_cast<double>((long double)lattice - pi_l * (long double)x);
}

} // namespace divmom::error_terms
