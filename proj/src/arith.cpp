#include "divmom/arith.hpp"

#include <cmath>
#include <limits>

namespace divmom {

u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    // sqrt() can be off by one ulp either way near 2^53 and above; settle it
    // with integer comparisons.
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

namespace arith {

DivisorTables build_tables(u64 limit) {
    if (limit == 0) throw std::invalid_argument("build_tables: limit must be >= 1");
    if (limit > (u64(1) << 32)) throw resource_limit_error("build_tables: limit too large for 32-bit tables");

    DivisorTables t;
    t.limit = limit;
    t.spf.assign(limit + 1, 0);
    t.spf[1] = 1;

    // Smallest prime factor by a standard sieve; every composite is crossed
    // off exactly once from its smallest prime.
    for (u64 i = 2; i <= limit; ++i) {
        if (t.spf[i] == 0) {
            for (u64 j = i; j <= limit; j += i)
                if (t.spf[j] == 0) t.spf[j] = static_cast<u32>(i);
        }
    }

    t.d.assign(limit + 1, 0);
    t.mu.assign(limit + 1, 0);
    t.kernel.assign(limit + 1, 0);
    t.d[1] = 1;
    t.mu[1] = 1;
    t.kernel[1] = 1;

    // Walk n in increasing order; n/p^e has already been finished, so d, mu
    // and kernel extend multiplicatively in O(log n) per entry.
    for (u64 n = 2; n <= limit; ++n) {
        u32 p = t.spf[n];
        u64 m = n;
        u32 e = 0;
        while (m % p == 0) { m /= p; ++e; }
        t.d[n] = t.d[m] * (e + 1);
        t.mu[n] = (e >= 2) ? std::int8_t(0) : std::int8_t(-t.mu[m]);
        t.kernel[n] = (e % 2 == 0) ? t.kernel[m] : t.kernel[m] * p;
    }
    return t;
}

i64 divisor_summatory(u64 x) {
    if (x == 0) return 0;
    u64 r = isqrt(x);
    u128 acc = 0;
    for (u64 n = 1; n <= r; ++n) acc += x / n;
    acc = 2 * acc - u128(r) * r;
    if (acc > u128(std::numeric_limits<i64>::max()))
        throw std::overflow_error("divisor_summatory: result exceeds int64");
    return static_cast<i64>(acc);
}

namespace {

// Count of odd integers in [1, x].
inline u64 odd_count(u64 x) { return (x + 1) / 2; }

// T(N) = #{(a,b): ab <= N, a and b odd}; same hyperbola shape as D but both
// legs restricted to odd values.
u64 odd_pair_count(u64 n) {
    if (n == 0) return 0;
    u64 r = isqrt(n);
    u128 acc = 0;
    for (u64 a = 1; a <= r; a += 2) acc += odd_count(n / a);
    acc = 2 * acc - u128(odd_count(r)) * odd_count(r);
    return static_cast<u64>(acc);
}

} // namespace

i64 alternating_divisor_summatory(u64 n) {
    if (n == 0) return 0;
    // sum (-1)^k d(k) = D(n) - 2 * sum_{k odd} d(k), and the odd-k divisor
    // sum counts pairs with odd product, i.e. both factors odd.
    i64 full = divisor_summatory(n);
    u64 odd = odd_pair_count(n);
    if (odd > u64(std::numeric_limits<i64>::max() / 2))
        throw std::overflow_error("alternating_divisor_summatory: overflow");
    return full - 2 * static_cast<i64>(odd);
}

i64 lattice_points_in_disk(double x) {
    if (!(x >= 0.0)) throw std::domain_error("lattice_points_in_disk: x must be >= 0");
    if (x >= 9.0e15) throw resource_limit_error("lattice_points_in_disk: x too large for exact counting");
    // i^2 + j^2 <= x iff i^2 + j^2 <= floor(x): the left side is an integer.
    u64 n = static_cast<u64>(std::floor(x));
    u64 r = isqrt(n);
    u128 acc = 0;
    // Column at i = 0, then symmetric pairs +-i.
    acc += 2 * isqrt(n) + 1;
    for (u64 i = 1; i <= r; ++i)
        acc += 2 * (2 * isqrt(n - i * i) + 1);
    return static_cast<i64>(acc);
}

double zeta_real(double s) {
    if (!(s > 1.0)) throw std::domain_error("zeta_real: need s > 1");
    // Euler-Maclaurin at cutoff M:
    //   zeta(s) = sum_{n<=M} n^-s + M^{1-s}/(s-1) - M^-s/2
    //           + sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * M^{-s-2k+1}
    // With M = 32 and terms through B_12 the remainder is below 1e-16 for
    // every s > 1 (it only shrinks as s grows).
    static const double b2k_over_fact[6] = {
        1.0 / 12.0,            // B2/2!
        -1.0 / 720.0,          // B4/4!
        1.0 / 30240.0,         // B6/6!
        -1.0 / 1209600.0,      // B8/8!
        1.0 / 47900160.0,      // B10/10!
        -691.0 / 1307674368000.0,
    };
    const int M = 32;
    long double sum = 0.0L;
    for (int n = 1; n <= M; ++n) sum += std::pow((long double)n, (long double)-s);
    long double Ms = std::pow((long double)M, (long double)-s);
    sum += Ms * M / (s - 1.0L);
    sum -= Ms / 2.0L;
    long double poch = s;                   // s(s+1)...(s+2k-2), grown as we go
    long double mpow = Ms / M;              // M^{-s-2k+1}
    for (int k = 1; k <= 6; ++k) {
        sum += b2k_over_fact[k - 1] * poch * mpow;
        poch *= (s + 2 * k - 1) * (s + 2 * k);
        mpow /= (long double)M * M;
    }
    return static_cast<double>(sum);
}

void divisor_counts_block(u64 lo, u64 hi, std::vector<u32>& out) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("divisor_counts_block: bad range");
    out.assign(hi - lo, 0);
    u64 r = isqrt(hi - 1);
    for (u64 a = 1; a <= r; ++a) {
        // Count each factorization n = a*b once, from its smaller factor a:
        // b > a contributes the pair (a,b) twice, b == a once.
        u64 first = ((lo + a - 1) / a) * a;
        if (first < a * a) first = a * a;
        for (u64 m = first; m < hi; m += a)
            out[m - lo] += (m / a > a) ? 2 : 1;
    }
}

void r2_counts_block(u64 lo, u64 hi, std::vector<i64>& out) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("r2_counts_block: bad range");
    out.assign(hi - lo, 0);
    // r2(n)/4 = #(odd divisors == 1 mod 4) - #(odd divisors == 3 mod 4).
    // Enumerate each pair n = e * q from its smaller side so a block of
    // length L costs O(L log hi + sqrt(hi)), not O(hi).
    u64 r = isqrt(hi - 1);
    for (u64 e = 1; e <= r; e += 2) {
        i64 w = (e % 4 == 1) ? 4 : -4;
        u64 first = ((lo + e - 1) / e) * e;
        for (u64 m = first; m < hi; m += e)
            out[m - lo] += w;
    }
    // odd divisors above sqrt(hi): step the cofactor q instead
    for (u64 q = 1; q * (r + 1) < hi; ++q) {
        u64 elo = (lo + q - 1) / q;
        if (elo < r + 1) elo = r + 1;
        u64 ehi = (hi - 1) / q;
        if ((elo & 1) == 0) ++elo;
        for (u64 e = elo; e <= ehi; e += 2)
            out[e * q - lo] += (e % 4 == 1) ? 4 : -4;
    }
}

} // namespace arith
} // namespace divmom
