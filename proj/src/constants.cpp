#include "divmom/constants.hpp"

#include <cmath>
#include <vector>

namespace divmom::constants {

bool surd_equal(u64 n, u64 m, u64 k, u64 l, const arith::DivisorTables& t) {
    if (n < 1 || m < 1 || k < 1 || l < 1)
        throw std::invalid_argument("surd_equal: arguments must be >= 1");
    u64 mx = std::max(std::max(n, m), std::max(k, l));
    if (mx > t.limit) throw std::invalid_argument("surd_equal: tables too small");
    return surd_pair_sum(n, m, t) == surd_pair_sum(k, l, t);
}

namespace {

// w(n) = d(n) n^{-3/4}, the universal quadruple weight factor.
std::vector<double> weight_vector(u64 y, const arith::DivisorTables& t) {
    std::vector<double> w(y + 1, 0.0);
    for (u64 n = 1; n <= y; ++n)
        w[n] = t.d[n] * std::pow(static_cast<double>(n), -0.75);
    return w;
}

struct QuadAccum {
    double value = 0.0;
    u64 tuples = 0;
};

// Geometric completion of the dyadic increments quarter -> half -> full.
// Degenerate bins or a non-contracting ratio (possible while the sum is
// still ramping at tiny y) fall back to the 1/sqrt(y) scale heuristic.
double completed_tail(double quarter, double half, double full, u64 y) {
    const double i1 = half - quarter, i2 = full - half;
    if (!(i1 > 0.0) || !(i2 > 0.0)) return 1.0 / std::sqrt(static_cast<double>(y));
    const double r = i2 / i1;
    if (r >= 0.98) return 1.0 / std::sqrt(static_cast<double>(y));
    return i2 * r / (1.0 - r);
}

// Walk the off-diagonal ("shifted") solution classes: squarefree h, ordered
// pairs (a,b) and (c,e) with a+b = c+e, all squares a^2 h .. e^2 h <= y, and
// {a,b} != {c,e} as multisets.  The callback sees each ordered quadruple
// (n,m,k,l) = (a^2 h, b^2 h, c^2 h, e^2 h).
template <typename F>
void for_each_shifted_class(u64 y, const arith::DivisorTables& t, F&& visit) {
    for (u64 h = 1; h <= y; ++h) {
        if (t.mu[h] == 0) continue;
        u64 cap = isqrt(y / h);
        if (cap < 2) continue;
        for (u64 s = 2; s <= 2 * cap; ++s) {
            u64 lo = (s > cap) ? s - cap : 1;
            u64 hi = std::min(cap, s - 1);
            if (lo >= hi) continue; // need at least two ordered pairs in the class
            for (u64 a = lo; a <= hi; ++a) {
                u64 b = s - a;
                for (u64 c = lo; c <= hi; ++c) {
                    u64 e = s - c;
                    if ((c == a && e == b) || (c == b && e == a)) continue;
                    visit(a * a * h, b * b * h, c * c * h, e * e * h);
                }
            }
        }
    }
}

} // namespace

ConstantEstimate c2_partial(u64 y, const arith::DivisorTables& t) {
    if (y < 1) throw std::invalid_argument("c2_partial: y must be >= 1");
    if (y > t.limit) throw std::invalid_argument("c2_partial: tables too small");
    if (y > 200000) throw resource_limit_error("c2_partial: y beyond enumeration budget");
    auto w = weight_vector(y, t);
    const u64 yq = y / 4, yh = y / 2;

    // Permutation part: ordered (n,m) with {k,l} = {n,m}, giving weight
    // (2 - [n=m]) w_n^2 w_m^2; collapses to 2 (sum w^2)^2 - sum w^4.
    // Snapshots at y/4 and y/2 feed the tail completion for free.
    double s2 = 0.0, s4 = 0.0;
    double quarter = 0.0, half = 0.0;
    for (u64 n = 1; n <= y; ++n) {
        s2 += w[n] * w[n];
        s4 += w[n] * w[n] * w[n] * w[n];
        if (n == yq) quarter = 2.0 * s2 * s2 - s4;
        if (n == yh) half = 2.0 * s2 * s2 - s4;
    }
    QuadAccum acc;
    acc.value = 2.0 * s2 * s2 - s4;
    acc.tuples = 2 * y * y - y;

    for_each_shifted_class(y, t, [&](u64 n, u64 m, u64 k, u64 l) {
        const double term = w[n] * w[m] * w[k] * w[l];
        const u64 mx = std::max(std::max(n, m), std::max(k, l));
        if (mx <= yq) quarter += term;
        if (mx <= yh) half += term;
        acc.value += term;
        ++acc.tuples;
    });

    return {acc.value, acc.tuples, static_cast<double>(y),
            completed_tail(quarter, half, acc.value, y)};
}

ConstantEstimate c2_star_partial(u64 y, const arith::DivisorTables& t) {
    if (y < 1) throw std::invalid_argument("c2_star_partial: y must be >= 1");
    if (y > t.limit) throw std::invalid_argument("c2_star_partial: tables too small");
    if (y > 30000) throw resource_limit_error("c2_star_partial: y beyond enumeration budget");
    auto w = weight_vector(y, t);
    const u64 yq = y / 4, yh = y / 2;

    QuadAccum acc;
    double quarter = 0.0, half = 0.0;
    // The sign is evaluated per ordered tuple; nothing below hardwires the
    // fact that it always comes out +1.
    for (u64 n = 1; n <= y; ++n)
        for (u64 m = 1; m <= y; ++m) {
            double base = w[n] * w[n] * w[m] * w[m];
            int mult = (n == m) ? 1 : 2; // (k,l) = (n,m) and, if distinct, (m,n)
            double sgn = ((n + m + n + m) % 2 == 0) ? 1.0 : -1.0;
            const double term = sgn * mult * base;
            const u64 mx = std::max(n, m);
            if (mx <= yq) quarter += term;
            if (mx <= yh) half += term;
            acc.value += term;
            acc.tuples += static_cast<u64>(mult);
        }

    for_each_shifted_class(y, t, [&](u64 n, u64 m, u64 k, u64 l) {
        double sgn = ((n + m + k + l) % 2 == 0) ? 1.0 : -1.0;
        const double term = sgn * w[n] * w[m] * w[k] * w[l];
        const u64 mx = std::max(std::max(n, m), std::max(k, l));
        if (mx <= yq) quarter += term;
        if (mx <= yh) half += term;
        acc.value += term;
        ++acc.tuples;
    });

    return {acc.value, acc.tuples, static_cast<double>(y),
            completed_tail(quarter, half, acc.value, y)};
}

ConstantEstimate c2_extrapolated(u64 y, const arith::DivisorTables& t) {
    ConstantEstimate base = c2_partial(y, t);
    return {base.value + base.tail_hint, base.term_count, base.truncation,
            base.tail_hint};
}

namespace {

// d over prime factorizations, for arguments far beyond any sieve table:
// d(alpha^2 h) with h squarefree needs the exponents of alpha and the primes
// of h only.
u32 d_of_square_times(u32 alpha, u32 h) {
    // merge exponents: e_p = 2*e_p(alpha) + [p | h]
    u32 result = 1;
    u32 a = alpha;
    for (u32 p = 2; static_cast<u64>(p) * p <= a || static_cast<u64>(p) * p <= h; ++p) {
        u32 e = 0;
        while (a % p == 0) { a /= p; ++e; }
        u32 hp = 0;
        if (h % p == 0) { hp = 1; while (h % p == 0) h /= p; }
        if (e || hp) result *= 2 * e + hp + 1;
    }
    // leftovers are prime
    if (a > 1 && a == h) { result *= 4; h = 1; }           // p^2 * p impossible for squarefree h... (a==h prime: e=1,hp=1 -> 2*1+1+1)
    else {
        if (a > 1) result *= 3;  // prime^2
        if (h > 1) result *= 2;  // prime^1
    }
    return result;
}

} // namespace

ConstantEstimate c1_partial(C1Limits lim) {
    if (lim.alpha_max < 1 || lim.beta_max < 1 || lim.h_max < 1)
        throw std::invalid_argument("c1_partial: limits must be >= 1");
    u64 work = static_cast<u64>(lim.alpha_max) * lim.beta_max * lim.h_max;
    if (work > 4000000000ull) throw resource_limit_error("c1_partial: limits beyond budget");

    // |mu| over h and a d(x^2 h) table, both by factorization.
    u32 hmax = lim.h_max;
    u32 xmax = lim.alpha_max + lim.beta_max;
    std::vector<char> squarefree(hmax + 1, 1);
    for (u32 p = 2; static_cast<u64>(p) * p <= hmax; ++p)
        for (u32 q = p * p; q <= hmax; q += p * p) squarefree[q] = 0;

    // dtab[x][h] = d(x^2 h) for squarefree h
    std::vector<std::vector<u32>> dtab(xmax + 1, std::vector<u32>(hmax + 1, 0));
    for (u32 x = 1; x <= xmax; ++x)
        for (u32 h = 1; h <= hmax; ++h)
            if (squarefree[h]) dtab[x][h] = d_of_square_times(x, h);

    double total = 0.0;
    u64 terms = 0;
    for (u32 al = 1; al <= lim.alpha_max; ++al)
        for (u32 be = 1; be <= lim.beta_max; ++be) {
            double abfac = std::pow(static_cast<double>(al) * be * (al + be), -1.5);
            for (u32 h = 1; h <= hmax; ++h) {
                if (!squarefree[h]) continue;
                total += abfac * std::pow(static_cast<double>(h), -2.25) *
                         static_cast<double>(dtab[al][h]) * dtab[be][h] * dtab[al + be][h];
                ++terms;
            }
        }

    double tail = 1.0 / std::sqrt(static_cast<double>(lim.alpha_max)) +
                  1.0 / std::sqrt(static_cast<double>(lim.beta_max)) +
                  std::pow(static_cast<double>(lim.h_max), -1.25);
    return {total, terms, static_cast<double>(std::max(lim.alpha_max, lim.beta_max)), tail};
}

ConstantEstimate h1_sum(u64 y, const arith::DivisorTables& t) {
    if (y < 1) throw std::invalid_argument("h1_sum: y must be >= 1");
    if (y > t.limit) throw std::invalid_argument("h1_sum: tables too small");
    if (y > 100000) throw resource_limit_error("h1_sum: y beyond enumeration budget");
    auto w = weight_vector(y, t);

    // Permutation part with the max^3 weight: ordered pairs (n,m), max = the
    // larger index.  Prefix sums over w^2 keep this O(Y).
    QuadAccum acc;
    double prefix = 0.0; // sum_{m<n} w_m^2
    for (u64 n = 1; n <= y; ++n) {
        double n3 = static_cast<double>(n) * n * n;
        double wn2 = w[n] * w[n];
        // (n,m) with m<n contributes 2 ordered (k,l) choices, and the mirrored
        // (m,n) pair the same amount: 4 * w_n^2 w_m^2 n^3 total.
        acc.value += 4.0 * n3 * wn2 * prefix + n3 * wn2 * wn2;
        prefix += wn2;
    }
    acc.tuples = 2 * y * y - y;

    for_each_shifted_class(y, t, [&](u64 n, u64 m, u64 k, u64 l) {
        double mx = static_cast<double>(std::max(std::max(n, m), std::max(k, l)));
        acc.value += w[n] * w[m] * w[k] * w[l] * mx * mx * mx;
        ++acc.tuples;
    });

    return {acc.value, acc.tuples, static_cast<double>(y),
            acc.value / std::pow(static_cast<double>(y), 2.5)};
}

ConstantEstimate h2_sum(u64 y, const arith::DivisorTables& t) {
    if (y < 1) throw std::invalid_argument("h2_sum: y must be >= 1");
    if (y > t.limit) throw std::invalid_argument("h2_sum: tables too small");
    if (y > 1000000) throw resource_limit_error("h2_sum: y beyond enumeration budget");
    auto w = weight_vector(y, t);

    // Solutions of sqrt(n)+sqrt(m)+sqrt(k) = sqrt(l) force a common kernel:
    // n = a^2 h, ..., l = e^2 h with a+b+c = e.  Ordered triples (a,b,c).
    double total = 0.0;
    u64 tuples = 0;
    for (u64 h = 1; h <= y; ++h) {
        if (t.mu[h] == 0) continue;
        u64 cap = isqrt(y / h); // e <= cap, so a+b+c <= cap
        if (cap < 3) continue;
        for (u64 a = 1; a + 2 <= cap; ++a)
            for (u64 b = 1; a + b + 1 <= cap; ++b)
                for (u64 c = 1; a + b + c <= cap; ++c) {
                    u64 e = a + b + c;
                    u64 n = a * a * h, m = b * b * h, k = c * c * h, l = e * e * h;
                    // weight l^{3/4}/(nmk)^{3/4} = w-style with d(l) on top
                    total += t.d[n] * t.d[m] * t.d[k] * static_cast<double>(t.d[l]) *
                             std::pow(static_cast<double>(l), 0.75) /
                             std::pow(static_cast<double>(n) * m * k, 0.75);
                    ++tuples;
                }
    }
    return {total, tuples, static_cast<double>(y),
            total / std::sqrt(static_cast<double>(y))};
}

double tong_constant() {
    const double pi = 3.14159265358979323846;
    double z32 = arith::zeta_real(1.5);
    return z32 * z32 * z32 * z32 / (6.0 * pi * pi * arith::zeta_real(3.0));
}

} // namespace divmom::constants
