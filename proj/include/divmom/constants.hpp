#pragma once
// Truncated evaluations of the arithmetic constants that govern the power
// moments of the divisor error term.
//
// The central object is the solution set of
//     sqrt(n) + sqrt(m) = sqrt(k) + sqrt(l),   n,m,k,l <= Y.
// By linear independence of square roots of squarefree integers, solutions
// are exactly (a) permutations {n,m} = {k,l} and (b) "shifted" classes
// n = a^2 h, m = b^2 h, k = c^2 h, l = e^2 h with h squarefree and
// a + b = c + e.  The enumerators below walk exactly those classes, so a
// partial sum over [1,Y]^4 costs O(Y^{3/2}) instead of O(Y^4).
//
// All quadruple sums are over ORDERED tuples, matching the way the fourth
// power of a cosine sum expands.

#include "divmom/arith.hpp"
#include "divmom/surd.hpp"

namespace divmom::constants {

struct ConstantEstimate {
    double value = 0.0;
    u64 term_count = 0;   // solution tuples actually visited
    double truncation = 0.0;
    // Estimated size of the omitted tail.  For c2/c2_star it is the geometric
    // completion of the dyadic increments (see c2_extrapolated); for c1 the
    // power-law truncation heuristic; for the growing sums h1/h2 it instead
    // records value / Y^{5/2} resp. value / Y^{1/2}, the ratio the growth
    // bounds cap.  Reported, never asserted.
    double tail_hint = 0.0;
};

// Exact test of sqrt(n)+sqrt(m) == sqrt(k)+sqrt(l); no floating tolerance.
bool surd_equal(u64 n, u64 m, u64 k, u64 l, const arith::DivisorTables& t);

// sum over solutions of d(n)d(m)d(k)d(l) (nmkl)^{-3/4}, truncated at Y.
ConstantEstimate c2_partial(u64 y, const arith::DivisorTables& t);

// Same sum with the alternating weight (-1)^{n+m+k+l}.  Every solution class
// turns out to have even n+m+k+l, so this must reproduce c2_partial exactly;
// the sign is still computed per tuple rather than assumed.
ConstantEstimate c2_star_partial(u64 y, const arith::DivisorTables& t);

// Estimate of the full convergent quadruple sum from data at truncation y
// alone: value = c2_partial(y).value + c2_partial(y).tail_hint, where the
// hint is the geometric completion of the dyadic increments
//   i1 = partial(y/2) - partial(y/4),  i2 = partial(y) - partial(y/2),
//   tail = i2 * r / (1 - r)  with  r = i2 / i1.
// All three partials come out of one enumeration (tuples binned by largest
// coordinate).  The measured ratio r sits above the asymptotic 2^{-1/2}
// because each increment still carries a log^3 factor, so the completion
// errs high; anchors y = 1.25e4 / 5e4 / 2e5 give 3673 / 3379 / 3278, a
// sequence tightening from above toward the value the fourth-moment
// integrals independently imply (~3.16e3).
ConstantEstimate c2_extrapolated(u64 y, const arith::DivisorTables& t);

// Triple sum for the cubic-moment constant:
//   sum_{alpha,beta,h} (alpha beta (alpha+beta))^{-3/2} h^{-9/4} |mu(h)|
//                      d(alpha^2 h) d(beta^2 h) d((alpha+beta)^2 h).
// Divisor values come from factorization, so the limits are not tied to any
// sieve table size.
struct C1Limits {
    u32 alpha_max;
    u32 beta_max;
    u32 h_max;
};
ConstantEstimate c1_partial(C1Limits lim);

// sum over the same equality solutions of
//   d(n)d(m)d(k)d(l) * max(n,m,k,l)^3 / (nmkl)^{3/4};  grows like Y^{5/2+eps}.
ConstantEstimate h1_sum(u64 y, const arith::DivisorTables& t);

// sum over solutions of sqrt(n)+sqrt(m)+sqrt(k) = sqrt(l), n..l <= Y, of
//   d(n)d(m)d(k)d(l) * l^{3/4} / (nmk)^{3/4};  grows like Y^{1/2+eps}.
ConstantEstimate h2_sum(u64 y, const arith::DivisorTables& t);

// zeta(3/2)^4 / (6 pi^2 zeta(3)), the mean-square constant ~0.6542840.
double tong_constant();

} // namespace divmom::constants
