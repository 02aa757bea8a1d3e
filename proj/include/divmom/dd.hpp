#pragma once
// Minimal double-double arithmetic (~31 significant digits).
//
// Used in two places where plain doubles genuinely run out of room:
//   * reducing oscillation phases 4*pi*sqrt(n*x) mod 2*pi once n*x is large,
//   * deciding near-ties |sum of four square roots| ~ 1e-13 in the spacing
//     module before the exact surd test takes over.
// Error-free transforms follow Dekker/Knuth; products go through std::fma,
// so results do not depend on compiler flags (never build with -ffast-math).

#include <cmath>
#include <cstdint>

namespace divmom {

struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

namespace dd_detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace dd_detail

inline dd dd_add(dd a, dd b) {
    using namespace dd_detail;
    dd s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, lo);
}

inline dd dd_add(dd a, double b) { return dd_add(a, dd{b, 0.0}); }

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }

inline dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul(dd a, dd b) {
    using namespace dd_detail;
    dd p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, lo);
}

inline dd dd_mul(dd a, double b) { return dd_mul(a, dd{b, 0.0}); }

inline dd dd_div(dd a, dd b) {
    using namespace dd_detail;
    double q0 = a.hi / b.hi;
    dd r = dd_sub(a, dd_mul(b, q0));
    double q1 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(b, q1));
    double q2 = r.hi / b.hi;
    dd q = quick_two_sum(q0, q1);
    return dd_add(q, q2);
}

// sqrt(v) for nonnegative v representable in double (here: products of two
// integer table indices, always < 2^53).  One Newton correction on the
// double estimate already gives full double-double accuracy.
inline dd dd_sqrt_of_u64(std::uint64_t v) {
    if (v == 0) return {0.0, 0.0};
    double s = std::sqrt(static_cast<double>(v));
    // r = v - s^2 exactly, then sqrt(v) ~= s + r / (2s).
    dd s2 = dd_detail::two_prod(s, s);
    dd r = dd_sub(dd{static_cast<double>(v), 0.0}, s2);
    double corr = r.hi / (2.0 * s);
    return dd_detail::quick_two_sum(s, corr);
}

// Fractional part of a nonnegative dd with hi < 2^53.
inline dd dd_frac(dd a) {
    double f = std::floor(a.hi);
    dd r = dd_add(dd{a.hi - f, 0.0}, dd{a.lo, 0.0});
    if (r.hi < 0.0) r = dd_add(r, dd{1.0, 0.0});
    if (r.hi >= 1.0) r = dd_sub(r, dd{1.0, 0.0});
    return r;
}

inline double dd_to_double(dd a) { return a.hi + a.lo; }

inline constexpr dd dd_2pi{6.283185307179586476925286766559005768e+00,
                           2.449293598294706414e-16};

} // namespace divmom
