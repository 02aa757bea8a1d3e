#include "divmom/spacing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "divmom/dd.hpp"
#include "divmom/surd.hpp"

namespace divmom::spacing {

namespace {

// Below this threshold a floating comparison can no longer separate a
// genuinely tiny combination from an exact zero, so everything inside
// the window is re-derived in double-double / exact surd arithmetic.
constexpr double kNearTie = 1e-8;

constexpr u64 kPlainSideCap = 20'000'000;   // values-only side budget
constexpr u64 kExactSideCap = 2'000'000;    // side budget with exact work
constexpr u64 kExactValueCap = 4'000'000;   // largest endpoint with exact work
constexpr u64 kWindowPairCap = 50'000'000;  // near-pair enumeration budget

struct Tagged {
    double value;
    u32 x, y, z;  // source integers; unused slots zero
};

void validate(const SpacingInstance& inst) {
    for (const Range& r : inst.ranges) {
        if (r.lo < 1 || r.hi < r.lo) throw std::invalid_argument("spacing: bad range");
        if (r.hi > 1'000'000'000'000ull)
            throw resource_limit_error("spacing: range endpoint above 1e12");
    }
    if (!(inst.delta > 0.0) || !std::isfinite(inst.delta))
        throw std::invalid_argument("spacing: delta must be positive and finite");
}

u64 checked_product(u64 a, u64 b, u64 cap, const char* what) {
    u128 p = static_cast<u128>(a) * b;
    if (p > cap) throw resource_limit_error(what);
    return static_cast<u64>(p);
}

u64 checked_product(u64 a, u64 b, u64 c, u64 cap, const char* what) {
    return checked_product(checked_product(a, b, cap, what), c, cap, what);
}

double root(u64 n) { return std::sqrt(static_cast<double>(n)); }

std::vector<double> pair_values(const Range& r1, const Range& r2) {
    std::vector<double> v;
    v.reserve(r1.size() * r2.size());
    for (u64 a = r1.lo; a <= r1.hi; ++a) {
        const double sa = root(a);
        for (u64 b = r2.lo; b <= r2.hi; ++b) v.push_back(sa + root(b));
    }
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<double> triple_values(const Range& r1, const Range& r2, const Range& r3) {
    std::vector<double> v;
    v.reserve(r1.size() * r2.size() * r3.size());
    for (u64 a = r1.lo; a <= r1.hi; ++a) {
        const double sa = root(a);
        for (u64 b = r2.lo; b <= r2.hi; ++b) {
            const double sab = sa + root(b);
            for (u64 c = r3.lo; c <= r3.hi; ++c) v.push_back(sab + root(c));
        }
    }
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<double> single_values(const Range& r) {
    std::vector<double> v;
    v.reserve(r.size());
    for (u64 a = r.lo; a <= r.hi; ++a) v.push_back(root(a));
    return v;  // already sorted
}

bool by_value(const Tagged& a, const Tagged& b) { return a.value < b.value; }

std::vector<Tagged> pair_tagged(const Range& r1, const Range& r2) {
    std::vector<Tagged> v;
    v.reserve(r1.size() * r2.size());
    for (u64 a = r1.lo; a <= r1.hi; ++a) {
        const double sa = root(a);
        for (u64 b = r2.lo; b <= r2.hi; ++b)
            v.push_back({sa + root(b), static_cast<u32>(a), static_cast<u32>(b), 0});
    }
    std::sort(v.begin(), v.end(), by_value);
    return v;
}

std::vector<Tagged> triple_tagged(const Range& r1, const Range& r2, const Range& r3) {
    std::vector<Tagged> v;
    v.reserve(r1.size() * r2.size() * r3.size());
    for (u64 a = r1.lo; a <= r1.hi; ++a) {
        const double sa = root(a);
        for (u64 b = r2.lo; b <= r2.hi; ++b) {
            const double sab = sa + root(b);
            for (u64 c = r3.lo; c <= r3.hi; ++c)
                v.push_back({sab + root(c), static_cast<u32>(a), static_cast<u32>(b),
                             static_cast<u32>(c)});
        }
    }
    std::sort(v.begin(), v.end(), by_value);
    return v;
}

std::vector<Tagged> single_tagged(const Range& r) {
    std::vector<Tagged> v;
    v.reserve(r.size());
    for (u64 a = r.lo; a <= r.hi; ++a) v.push_back({root(a), static_cast<u32>(a), 0, 0});
    return v;
}

// #{(a, b) : |a - b| < delta}, both arrays ascending.
u64 sweep_count_open(const std::vector<double>& a, const std::vector<double>& b,
                     double delta) {
    u64 cnt = 0;
    size_t lo = 0, hi = 0;
    for (double v : a) {
        while (lo < b.size() && b[lo] <= v - delta) ++lo;
        while (hi < b.size() && b[hi] < v + delta) ++hi;
        cnt += hi - lo;
    }
    return cnt;
}

// #{(a, b) : |a - b| <= delta} (closed, for the bucket bound).
u64 sweep_count_closed(const std::vector<double>& a, const std::vector<double>& b,
                       double delta) {
    u64 cnt = 0;
    size_t lo = 0, hi = 0;
    for (double v : a) {
        while (lo < b.size() && b[lo] < v - delta) ++lo;
        while (hi < b.size() && b[hi] <= v + delta) ++hi;
        cnt += hi - lo;
    }
    return cnt;
}

// #{(a, b) : a + b < delta} for the all-plus pattern.
u64 sweep_count_sum(const std::vector<double>& a, const std::vector<double>& b,
                    double delta) {
    u64 cnt = 0;
    size_t j = b.size();
    for (double v : a) {
        while (j > 0 && b[j - 1] >= delta - v) --j;
        cnt += j;
    }
    return cnt;
}

// Canonical surd key of sqrt(x) [+ sqrt(y) [+ sqrt(z)]]; all terms
// positive, at most three after merging.
using Key = std::array<u64, 6>;

Key key_of(const Tagged& t, int arity, const arith::DivisorTables& tab) {
    SurdForm f;
    surd_accumulate_sqrt(f, t.x, +1, tab);
    if (arity >= 2) surd_accumulate_sqrt(f, t.y, +1, tab);
    if (arity >= 3) surd_accumulate_sqrt(f, t.z, +1, tab);
    Key k{};
    for (std::size_t i = 0; i < f.n_terms; ++i) {
        k[2 * i] = f.kernel[i];
        k[2 * i + 1] = static_cast<u64>(f.coeff[i]);
    }
    return k;
}

std::vector<Key> keys_of(const std::vector<Tagged>& v, int arity,
                         const arith::DivisorTables& tab) {
    std::vector<Key> out;
    out.reserve(v.size());
    for (const Tagged& t : v) out.push_back(key_of(t, arity, tab));
    std::sort(out.begin(), out.end());
    return out;
}

// sum over shared keys of (run length in ka) * (run length in kb)
u64 match_keys(const std::vector<Key>& ka, const std::vector<Key>& kb) {
    u64 total = 0;
    size_t i = 0, j = 0;
    while (i < ka.size() && j < kb.size()) {
        if (ka[i] < kb[j]) {
            ++i;
        } else if (kb[j] < ka[i]) {
            ++j;
        } else {
            size_t ri = i + 1, rj = j + 1;
            while (ri < ka.size() && ka[ri] == ka[i]) ++ri;
            while (rj < kb.size() && kb[rj] == kb[j]) ++rj;
            total += static_cast<u64>(ri - i) * static_cast<u64>(rj - j);
            i = ri;
            j = rj;
        }
    }
    return total;
}

dd dd_sum(const Tagged& t, int arity) {
    dd s = dd_sqrt_of_u64(t.x);
    if (arity >= 2) s = dd_add(s, dd_sqrt_of_u64(t.y));
    if (arity >= 3) s = dd_add(s, dd_sqrt_of_u64(t.z));
    return s;
}

}  // namespace

Range dyadic_range(u64 n) {
    if (n == 0) throw std::invalid_argument("dyadic_range: N must be >= 1");
    return Range{n + 1, 2 * n, true, n};
}

Range box_range(u64 lo, u64 hi) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("box_range: need 1 <= lo <= hi");
    return Range{lo, hi, false, 0};
}

SpacingCount count_solutions(const SpacingInstance& inst) {
    validate(inst);
    const Range &r1 = inst.ranges[0], &r2 = inst.ranges[1], &r3 = inst.ranges[2],
                &r4 = inst.ranges[3];
    SpacingCount out;

    if (inst.pattern == Pattern::pppp) {
        // the combination is a sum of four positive roots: never zero
        checked_product(r1.size(), r2.size(), kPlainSideCap, "spacing: side too large");
        checked_product(r3.size(), r4.size(), kPlainSideCap, "spacing: side too large");
        out.count = sweep_count_sum(pair_values(r1, r2), pair_values(r3, r4), inst.delta);
        out.equality_count = 0;
        out.equality_counted = true;
        return out;
    }

    const int arity_a = (inst.pattern == Pattern::pppm) ? 3 : 2;
    const bool need_exact = inst.exclude_zero || inst.delta < kNearTie;

    if (!need_exact) {
        std::vector<double> a, b;
        if (inst.pattern == Pattern::ppmm) {
            checked_product(r1.size(), r2.size(), kPlainSideCap, "spacing: side too large");
            checked_product(r3.size(), r4.size(), kPlainSideCap, "spacing: side too large");
            a = pair_values(r1, r2);
            b = pair_values(r3, r4);
        } else {
            checked_product(r1.size(), r2.size(), r3.size(), kPlainSideCap,
                            "spacing: side too large");
            a = triple_values(r1, r2, r3);
            b = single_values(r4);
        }
        out.count = sweep_count_open(a, b, inst.delta);
        out.equality_counted = false;
        return out;
    }

    // Exact path: zeros must be recognized, so every element carries its
    // source integers and a canonical surd key.
    u64 max_hi = 0;
    for (const Range& r : inst.ranges) max_hi = std::max(max_hi, r.hi);
    if (max_hi > kExactValueCap)
        throw resource_limit_error("spacing: exact zero classification capped at 4e6");
    std::vector<Tagged> a, b;
    if (inst.pattern == Pattern::ppmm) {
        checked_product(r1.size(), r2.size(), kExactSideCap, "spacing: side too large");
        checked_product(r3.size(), r4.size(), kExactSideCap, "spacing: side too large");
        a = pair_tagged(r1, r2);
        b = pair_tagged(r3, r4);
    } else {
        checked_product(r1.size(), r2.size(), r3.size(), kExactSideCap,
                        "spacing: side too large");
        a = triple_tagged(r1, r2, r3);
        b = single_tagged(r4);
    }
    const int arity_b = (inst.pattern == Pattern::pppm) ? 1 : 2;
    auto tables = arith::build_tables(max_hi);

    if (inst.delta >= kNearTie) {
        std::vector<double> av(a.size()), bv(b.size());
        for (size_t i = 0; i < a.size(); ++i) av[i] = a[i].value;
        for (size_t i = 0; i < b.size(); ++i) bv[i] = b[i].value;
        const u64 total = sweep_count_open(av, bv, inst.delta);
        out.equality_count = match_keys(keys_of(a, arity_a, tables), keys_of(b, arity_b, tables));
        out.equality_counted = true;
        out.count = inst.exclude_zero ? total - out.equality_count : total;
        return out;
    }

    // delta below the float floor: enumerate the near window and settle
    // each pair in double-double / exact arithmetic
    const double window = inst.delta + 1e-9;
    u64 n_zero = 0, n_small = 0, n_pairs = 0;
    size_t lo = 0, hi = 0;
    for (const Tagged& ta : a) {
        while (lo < b.size() && b[lo].value <= ta.value - window) ++lo;
        while (hi < b.size() && b[hi].value < ta.value + window) ++hi;
        n_pairs += hi - lo;
        if (n_pairs > kWindowPairCap)
            throw resource_limit_error("spacing: near-tie window too dense");
        const Key ka = key_of(ta, arity_a, tables);
        const dd sa = dd_sum(ta, arity_a);
        for (size_t j = lo; j < hi; ++j) {
            if (ka == key_of(b[j], arity_b, tables)) {
                ++n_zero;
                continue;
            }
            const dd diff = dd_sub(sa, dd_sum(b[j], arity_b));
            if (std::fabs(diff.hi + diff.lo) < inst.delta) ++n_small;
        }
    }
    out.equality_count = n_zero;
    out.equality_counted = true;
    out.count = inst.exclude_zero ? n_small : n_small + n_zero;
    return out;
}

GapResult min_nonzero_gap(u64 limit, Pattern pattern) {
    if (limit == 0) throw std::invalid_argument("min_nonzero_gap: limit must be >= 1");
    if (limit > 400) throw resource_limit_error("min_nonzero_gap: limit capped at 400");
    if (pattern == Pattern::pppp) {
        // every value is at least 4 sqrt(1); the minimum is the corner
        return GapResult{4.0, {1, 1, 1, 1},
                         4.0 * std::pow(static_cast<double>(limit), 3.5)};
    }

    auto tables = arith::build_tables(limit);

    // side A: sqrt(x) + sqrt(y), x <= y
    std::vector<Tagged> a;
    a.reserve(limit * (limit + 1) / 2);
    for (u64 x = 1; x <= limit; ++x)
        for (u64 y = x; y <= limit; ++y)
            a.push_back({root(x) + root(y), static_cast<u32>(x), static_cast<u32>(y), 0});
    std::sort(a.begin(), a.end(), by_value);

    // side B: for ppmm the same pair sums; for pppm the differences
    // sqrt(l) - sqrt(k), so that s = a - b = sqrt x + sqrt y + sqrt k - sqrt l
    std::vector<Tagged> b;
    if (pattern == Pattern::pppm) {
        b.reserve(limit * limit);
        for (u64 k = 1; k <= limit; ++k)
            for (u64 l = 1; l <= limit; ++l)
                b.push_back({root(l) - root(k), static_cast<u32>(k), static_cast<u32>(l), 0});
        std::sort(b.begin(), b.end(), by_value);
    }
    const std::vector<Tagged>& bb = (pattern == Pattern::ppmm) ? a : b;

    // pass 1: float estimate of the smallest clearly-nonzero difference
    double rough = std::numeric_limits<double>::infinity();
    if (pattern == Pattern::ppmm) {
        for (size_t i = 0; i + 1 < a.size(); ++i) {
            const double d = a[i + 1].value - a[i].value;
            if (d > kNearTie && d < rough) rough = d;
        }
    } else {
        size_t j = 0;
        for (const Tagged& ta : a) {
            while (j < bb.size() && bb[j].value < ta.value) ++j;
            if (j < bb.size()) {
                const double d = bb[j].value - ta.value;
                if (d > kNearTie && d < rough) rough = d;
            }
            if (j > 0) {
                const double d = ta.value - bb[j - 1].value;
                if (d > kNearTie && d < rough) rough = d;
            }
        }
    }

    // pass 2: every pair within the window, settled exactly
    const double window =
        std::max(2.0 * kNearTie, (std::isfinite(rough) ? rough + 1e-9 : 2.0 * kNearTie));
    const bool same_side = (pattern == Pattern::ppmm);
    double best = std::numeric_limits<double>::infinity();
    std::array<u64, 4> best_witness{};
    bool found = false;
    u64 n_pairs = 0;

    auto consider = [&](const Tagged& ta, const Tagged& tb) {
        SurdForm f;
        surd_accumulate_sqrt(f, ta.x, +1, tables);
        surd_accumulate_sqrt(f, ta.y, +1, tables);
        dd s = dd_add(dd_sqrt_of_u64(ta.x), dd_sqrt_of_u64(ta.y));
        std::array<u64, 4> wit;
        if (pattern == Pattern::ppmm) {
            surd_accumulate_sqrt(f, tb.x, -1, tables);
            surd_accumulate_sqrt(f, tb.y, -1, tables);
            s = dd_sub(s, dd_add(dd_sqrt_of_u64(tb.x), dd_sqrt_of_u64(tb.y)));
            wit = {ta.x, ta.y, tb.x, tb.y};
            const std::array<u64, 4> swapped = {tb.x, tb.y, ta.x, ta.y};
            if (swapped < wit) wit = swapped;
        } else {
            // tb encodes sqrt(l) - sqrt(k) as (x=k, y=l)
            surd_accumulate_sqrt(f, tb.x, +1, tables);
            surd_accumulate_sqrt(f, tb.y, -1, tables);
            s = dd_add(s, dd_sub(dd_sqrt_of_u64(tb.x), dd_sqrt_of_u64(tb.y)));
            std::array<u64, 3> three = {ta.x, ta.y, tb.x};
            std::sort(three.begin(), three.end());
            wit = {three[0], three[1], three[2], tb.y};
        }
        if (f.is_zero()) return;
        const double gap = std::fabs(s.hi + s.lo);
        if (gap < best || (gap == best && wit < best_witness)) {
            best = gap;
            best_witness = wit;
            found = true;
        }
    };

    size_t lo = 0, hi = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double v = a[i].value;
        while (lo < bb.size() && bb[lo].value < v - window) ++lo;
        while (hi < bb.size() && bb[hi].value <= v + window) ++hi;
        for (size_t j = std::max(lo, same_side ? i + 1 : size_t{0}); j < hi; ++j) {
            if (same_side && j <= i) continue;
            if (++n_pairs > kWindowPairCap)
                throw resource_limit_error("min_nonzero_gap: window too dense");
            consider(a[i], bb[j]);
        }
    }
    if (!found) throw std::domain_error("min_nonzero_gap: no nonzero combination in range");

    return GapResult{best, best_witness,
                     best * std::pow(static_cast<double>(limit), 3.5)};
}

BucketBound bucket_bound(const SpacingInstance& inst) {
    validate(inst);
    if (inst.pattern == Pattern::pppp)
        throw std::invalid_argument("bucket_bound: needs a difference pattern");
    const Range &r1 = inst.ranges[0], &r2 = inst.ranges[1], &r3 = inst.ranges[2],
                &r4 = inst.ranges[3];
    std::vector<double> a, b;
    if (inst.pattern == Pattern::ppmm) {
        checked_product(r1.size(), r2.size(), kPlainSideCap, "spacing: side too large");
        checked_product(r3.size(), r4.size(), kPlainSideCap, "spacing: side too large");
        a = pair_values(r1, r2);
        b = pair_values(r3, r4);
    } else {
        checked_product(r1.size(), r2.size(), r3.size(), kPlainSideCap,
                        "spacing: side too large");
        a = triple_values(r1, r2, r3);
        b = single_values(r4);
    }

    BucketBound out;
    out.exact_count = sweep_count_closed(a, b, inst.delta);

    const double origin = std::min(a.front(), b.front());
    auto sum_sq_bucket_counts = [&](const std::vector<double>& v) -> double {
        // v sorted: bucket indices are nondecreasing, so runs suffice
        u128 sum = 0;
        size_t i = 0;
        while (i < v.size()) {
            const i64 bucket = static_cast<i64>(std::floor((v[i] - origin) / inst.delta));
            size_t j = i;
            while (j < v.size() &&
                   static_cast<i64>(std::floor((v[j] - origin) / inst.delta)) == bucket)
                ++j;
            const u64 run = j - i;
            sum += static_cast<u128>(run) * run;
            i = j;
        }
        return static_cast<double>(sum);
    };
    out.bound = 3.0 * std::sqrt(sum_sq_bucket_counts(a)) * std::sqrt(sum_sq_bucket_counts(b));
    return out;
}

u64 fractional_count(double alpha, double beta, u64 big_k, double delta) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("fractional_count: delta must lie in (0, 1/2)");
    if (big_k == 0) throw std::invalid_argument("fractional_count: K must be >= 1");
    if (big_k > 100'000'000ull)
        throw resource_limit_error("fractional_count: K capped at 1e8");
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("fractional_count: alpha, beta must be finite");
    u64 cnt = 0;
    for (u64 k = big_k + 1; k <= 2 * big_k; ++k) {
        const double x = beta + alpha * std::sqrt(static_cast<double>(k));
        if (std::fabs(std::remainder(x, 1.0)) < delta) ++cnt;
    }
    return cnt;
}

SpacingBounds spacing_bounds(const SpacingInstance& inst) {
    validate(inst);
    SpacingBounds out;
    for (const Range& r : inst.ranges)
        if (!r.is_dyadic) return out;  // formulas speak about dyadic ranges only

    const double n1 = static_cast<double>(inst.ranges[0].n_param);
    const double n2 = static_cast<double>(inst.ranges[1].n_param);
    const double n3 = static_cast<double>(inst.ranges[2].n_param);
    const double n4 = static_cast<double>(inst.ranges[3].n_param);
    const double d = inst.delta;
    const double top = 2.0 * std::max(std::max(n1, n2), std::max(n3, n4));
    const double lg = std::log(top);
    const double eps = std::max(1.0, lg * lg);
    auto comparable = [](double u, double v) {
        return u <= 4.0 * v && v <= 4.0 * u;
    };

    if (inst.pattern == Pattern::ppmm) {
        if (n1 == n2 && n2 == n3 && n3 == n4)
            out.equal_range = (d * std::pow(n1, 3.5) + n1 * n1) * eps;
        double prod = 1.0;
        for (double nj : {n1, n2, n3, n4})
            prod *= std::pow(d, 0.25) * std::pow(nj, 0.875) + std::sqrt(nj);
        out.product_form = prod * eps;
        if (n1 <= n2 && n4 <= n3 && n1 <= n4 && comparable(n2, n3))
            out.pair_difference =
                (d * std::sqrt(n3) * n1 * n2 * n4 + n1 * n4 * std::sqrt(n3)) * eps;
    } else if (inst.pattern == Pattern::pppm) {
        if (n1 <= n2 && n2 <= n3 && comparable(n3, n4))
            out.triple_sum =
                (d * std::sqrt(n4) * n1 * n2 * n3 + n1 * n2 * std::sqrt(n3)) * eps;
    }
    return out;
}

}  // namespace divmom::spacing
