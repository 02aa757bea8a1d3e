#pragma once
// Gauss-Legendre nodes and weights on [-1, 1], plus a tiny panel helper.
// Node values are frozen to 17 significant digits; GL8 integrates
// polynomials through degree 15 exactly, GL16 through degree 31.

#include <cstddef>

namespace divmom::quad {

struct NodeWeight {
    double x;
    double w;
};

inline constexpr NodeWeight gl8[8] = {
    {-9.60289856497536176e-01, 1.01228536290376689e-01},
    {-7.96666477413626728e-01, 2.22381034453374343e-01},
    {-5.25532409916328991e-01, 3.13706645877887047e-01},
    {-1.83434642495649780e-01, 3.62683783378361768e-01},
    {1.83434642495649780e-01, 3.62683783378361768e-01},
    {5.25532409916328991e-01, 3.13706645877887047e-01},
    {7.96666477413626728e-01, 2.22381034453374343e-01},
    {9.60289856497536176e-01, 1.01228536290376689e-01},
};

inline constexpr NodeWeight gl16[16] = {
    {-9.89400934991649939e-01, 2.71524594117540374e-02},
    {-9.44575023073232600e-01, 6.22535239386477063e-02},
    {-8.65631202387831755e-01, 9.51585116824925914e-02},
    {-7.55404408355002999e-01, 1.24628971255534030e-01},
    {-6.17876244402643771e-01, 1.49595988816576764e-01},
    {-4.58016777657227370e-01, 1.69156519395002619e-01},
    {-2.81603550779258915e-01, 1.82603415044923612e-01},
    {-9.50125098376374544e-02, 1.89450610455068585e-01},
    {9.50125098376374544e-02, 1.89450610455068585e-01},
    {2.81603550779258915e-01, 1.82603415044923612e-01},
    {4.58016777657227370e-01, 1.69156519395002619e-01},
    {6.17876244402643771e-01, 1.49595988816576764e-01},
    {7.55404408355002999e-01, 1.24628971255534030e-01},
    {8.65631202387831755e-01, 9.51585116824925914e-02},
    {9.44575023073232600e-01, 6.22535239386477063e-02},
    {9.89400934991649939e-01, 2.71524594117540374e-02},
};

// Integrate f over [a, b] with a single n-node rule.
template <std::size_t N, typename F>
double panel(const NodeWeight (&rule)[N], double a, double b, F&& f) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += rule[i].w * f(mid + half * rule[i].x);
    return half * acc;
}

}  // namespace divmom::quad
