#pragma once
// Truncated oscillating-series models of the divisor error terms:
//
//   delta(x)  ~ x^{1/4}/(pi sqrt2) sum_{n<=N} d(n) n^{-3/4} cos(4pi sqrt(nx) - pi/4)
//   delta*(x) ~ same with the extra weight (-1)^n
//
// and the exact four-way split of the fourth power of the model sum.  Writing
// R(x) for the un-normalized cosine sum, R^4 expands by product-to-sum into
// a resonant piece (phases sqrt n + sqrt m - sqrt k - sqrt l = 0), its
// oscillating complement, and two faster-oscillating pieces:
//
//   R^4 = 3/8 S= + 3/8 S!= + 1/2 S_sin + (-1/8) S_cos4
//
// The resonant/non-resonant split is decided by exact surd arithmetic, never
// by a floating tolerance.

#include "divmom/arith.hpp"

namespace divmom::voronoi {

// Truncation length giving the classical O(x^{1/2+eps}/N^{1/2}) error balance.
u64 default_cutoff(double x);

double voronoi_delta(double x, u64 n_terms, const arith::DivisorTables& t);
double voronoi_delta_star(double x, u64 n_terms, const arith::DivisorTables& t);

struct QuadTerms {
    double s1; // resonant part: 3/8 * x * sum over exact solutions
    double s2; // non-resonant 2+2 cosine part
    double s3; // 3+1 sine part, coefficient 1/2
    double s4; // all-plus cosine part, coefficient -1/8
};

// All four pieces for the cutoff y; s1+s2+s3+s4 reproduces R(x)^4 up to
// rounding.  y is capped (the class enumeration behind s1 is the expensive
// bit at scale).
QuadTerms quad_decomposition_terms(double x, u32 y_cutoff, const arith::DivisorTables& t);

} // namespace divmom::voronoi
