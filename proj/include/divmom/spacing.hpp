#pragma once
// Counting integer quadruples whose signed square-root combination
//
//     s = sqrt(n1) + sqrt(n2) - sqrt(n3) - sqrt(n4)        (ppmm)
//     s = sqrt(n1) + sqrt(n2) + sqrt(n3) - sqrt(n4)        (pppm)
//     s = sqrt(n1) + sqrt(n2) + sqrt(n3) + sqrt(n4)        (pppp)
//
// is small, together with the classical upper-bound formulas those
// counts are measured against.  Counts are exact: the sweep works in
// doubles, but anything within 1e-8 of zero is re-evaluated in
// double-double and classified by exact surd canonicalization, so a
// quadruple is called "zero" only when s vanishes identically.

#include <array>
#include <optional>

#include "divmom/arith.hpp"

namespace divmom::spacing {

enum class Pattern { ppmm, pppm, pppp };

// Closed integer interval [lo, hi].  Dyadic ranges (N, 2N] remember N so
// the bound formulas can be instantiated.
struct Range {
    u64 lo = 1, hi = 1;
    bool is_dyadic = false;
    u64 n_param = 0;
    u64 size() const { return hi - lo + 1; }
};
Range dyadic_range(u64 n);
Range box_range(u64 lo, u64 hi);

struct SpacingInstance {
    std::array<Range, 4> ranges;
    Pattern pattern = Pattern::ppmm;
    double delta = 0.0;
    bool exclude_zero = false;
};

struct SpacingCount {
    u64 count = 0;           // ordered quadruples with |s| < delta, strict;
                             // exact zeros removed when exclude_zero is set
    u64 equality_count = 0;  // ordered quadruples with s = 0 exactly
    bool equality_counted = false;  // false when the run skipped exact work
};

// Pair-sum sweep: sort the two sides' partial sums, then count near
// pairs by a moving window.  Budget: at most 2e7 values per side in the
// plain float mode; exact-equality work (needed when exclude_zero is
// set or delta < 1e-8) caps endpoints and side sizes at 4e6.
SpacingCount count_solutions(const SpacingInstance& inst);

// Smallest nonzero |s| over [1, limit]^4, found by an O(limit^2 log)
// sweep of pair sums (and pair differences for pppm) with double-double
// refinement of every near tie.  The witness is canonicalized: each
// side sorted ascending, sides ordered lexicographically where the
// pattern allows the swap; among equal-gap witnesses the smallest wins.
// normalized = gap * limit^{7/2}, the scale on which the minimum gap is
// conjectured to stay bounded away from zero.
struct GapResult {
    double gap = 0.0;
    std::array<u64, 4> witness{};
    double normalized = 0.0;
};
GapResult min_nonzero_gap(u64 limit, Pattern pattern);

// Bucket the two sides' values into width-delta intervals from the
// common minimum and evaluate the Cauchy-Schwarz near-pair bound
// 3 (sum_j A_j^2)^{1/2} (sum_j B_j^2)^{1/2} next to the exact count of
// pairs with |a - b| <= delta (closed, per the bound's statement).
struct BucketBound {
    u64 exact_count = 0;
    double bound = 0.0;
};
BucketBound bucket_bound(const SpacingInstance& inst);

// #{ k in (K, 2K] : || beta + alpha sqrt(k) || < delta } by direct scan,
// where ||x|| is the distance from x to the nearest integer.
// delta must lie in (0, 1/2).
u64 fractional_count(double alpha, double beta, u64 big_k, double delta);

// The four classical bound formulas, each filled only when the
// instance's sign pattern and range shape satisfy its hypotheses; the
// epsilon-power slack in each is instantiated as log^2(largest upper
// endpoint), floored at 1.
//   equal_range:     all ranges dyadic N, pattern ppmm:
//                    (delta N^{7/2} + N^2) * eps
//   product_form:    dyadic ranges, pattern ppmm:
//                    prod_j (delta^{1/4} Nj^{7/8} + Nj^{1/2}) * eps
//   pair_difference: dyadic N,M,K,L with N<=M, L<=K, N<=L, M/K in [1/4,4],
//                    pattern ppmm, for the zero-excluded count:
//                    (delta K^{1/2} N M L + N L K^{1/2}) * eps
//   triple_sum:      dyadic N<=M<=K, K/L in [1/4,4], pattern pppm:
//                    (delta L^{1/2} N M K + N M K^{1/2}) * eps
struct SpacingBounds {
    std::optional<double> equal_range;
    std::optional<double> product_form;
    std::optional<double> pair_difference;
    std::optional<double> triple_sum;
};
SpacingBounds spacing_bounds(const SpacingInstance& inst);

}  // namespace divmom::spacing
