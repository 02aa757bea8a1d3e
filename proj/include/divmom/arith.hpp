#pragma once
// Divisor-function tables and exact summatory counts.
//
// Everything in here is integer-exact: sieves for d(n), mu(n) and the
// squarefree kernel, the O(sqrt x) hyperbola evaluation of
// D(x) = sum_{n<=x} d(n), its parity-restricted variant, and the lattice
// point count for the circle problem.  Floating point enters only through
// zeta_real, which is Euler-Maclaurin with a rigorous tail cutoff.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace divmom {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Thrown when a request is well-formed but would exceed a configured
// work or memory budget.  The CLI maps this to its own exit code.
class resource_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// floor(sqrt(n)) exact for all u64 n.  The double estimate is refined so the
// defining inequalities r^2 <= n < (r+1)^2 hold without exception.
u64 isqrt(u64 n);

namespace arith {

// Sieved tables for 1..limit.  Index 0 is a filler so that t.d[n] is d(n).
//   d[n]      number of divisors
//   mu[n]     Moebius function, in {-1,0,1}
//   kernel[n] largest squarefree divisor k with n = a^2 * k  (so mu[n] != 0
//             exactly when kernel[n] == n)
//   spf[n]    smallest prime factor (spf[1] = 1); kept because it makes
//             repeated factorizations O(log n), which the surd canonicalizer
//             leans on heavily
// Memory is ~13 bytes per entry; a limit of 10^7 costs ~130 MB.
struct DivisorTables {
    u64 limit = 0;
    std::vector<u32> d;
    std::vector<std::int8_t> mu;
    std::vector<u32> kernel;
    std::vector<u32> spf;
};

DivisorTables build_tables(u64 limit);

// D(x) = sum_{n<=floor(x)} d(n) by the Dirichlet hyperbola identity
//   D(x) = 2 * sum_{n<=sqrt(x)} floor(x/n) - floor(sqrt(x))^2.
// Accumulation is 128-bit; overflow past int64 raises overflow_error.
i64 divisor_summatory(u64 x);

// sum_{n<=N} (-1)^n d(n), evaluated as D(N) - 2*T(N) where T counts the
// divisor pairs (a,b), ab <= N, with both factors odd.  T has its own
// hyperbola form over the odd integers, so the whole thing stays O(sqrt N).
i64 alternating_divisor_summatory(u64 n);

// Number of integer pairs (i,j) with i^2 + j^2 <= x.  The thresholds are
// integers, so the count only changes at integer x and floor(x) captures the
// boundary exactly; each column is closed with an integer sqrt.
i64 lattice_points_in_disk(double x);

// Riemann zeta on the real axis, s > 1 only.  Euler-Maclaurin with enough
// Bernoulli terms that the result is correct to ~1e-14 absolute.
double zeta_real(double s);

// Segmented sieves used by the moment integrators, which walk n up to 4*10^7
// and cannot afford full tables.  Each call fills out[i] for n = lo + i,
// lo <= n < hi.
void divisor_counts_block(u64 lo, u64 hi, std::vector<u32>& out);

// r2(n) = #{(i,j) : i^2 + j^2 = n} via 4 * sum_{odd e | n} chi(e) with chi the
// nontrivial character mod 4.
void r2_counts_block(u64 lo, u64 hi, std::vector<i64>& out);

} // namespace arith
} // namespace divmom
