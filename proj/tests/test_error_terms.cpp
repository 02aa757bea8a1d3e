#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "divmom/error_terms.hpp"

#include <cmath>
#include <random>

using namespace divmom;
namespace et = divmom::error_terms;

TEST_CASE("gamma literal survives recomputation") {
    CHECK(std::fabs(et::euler_gamma - 0.57721566490153286060) < 1e-18);
    CHECK(std::fabs(et::euler_gamma_recomputed() - et::euler_gamma) < 1e-12);
    CHECK_NOTHROW(et::validate_euler_gamma());
}

TEST_CASE("divisor error term at hand-checked points") {
    // delta(1) = 1 - (2*gamma - 1)
    CHECK(et::delta(1.0) == doctest::Approx(0.84556867).epsilon(1e-7));
    // D(10) = 27, main term 24.5701642...
    CHECK(et::delta(10.0) == doctest::Approx(2.42983577).epsilon(1e-7));
    // D(100) = 482
    CHECK(et::delta(100.0) == doctest::Approx(6.0398484).epsilon(1e-6));
    CHECK_THROWS_AS(et::delta(0.5), std::domain_error);
}

TEST_CASE("delta jumps by d(m) across integers") {
    auto t = arith::build_tables(3000);
    for (u64 m : {u64(2), u64(3), u64(10), u64(36), u64(100), u64(720), u64(2520)}) {
        double jump = et::delta(double(m)) - et::delta(double(m) - 1e-9);
        CHECK(jump == doctest::Approx(double(t.d[m])).epsilon(1e-6));
    }
}

TEST_CASE("alternating error term at hand-checked points") {
    CHECK(et::delta_star(1.0) == doctest::Approx(0.84556867).epsilon(1e-7));
    CHECK(et::delta_star(2.0) == doctest::Approx(1.30484298).epsilon(1e-7));
    // first piece: floor(4x) = 1 on [1/4, 1/2)
    CHECK(et::delta_star(0.25) == doctest::Approx(-0.19203424).epsilon(1e-6));
    CHECK_THROWS_AS(et::delta_star(0.2), std::domain_error);
}

TEST_CASE("delta_star pieces step at quarter-integers") {
    // constant arithmetic part on [m/4, (m+1)/4); jump at m/4 is (-1)^m d(m)/2
    auto t = arith::build_tables(64);
    for (u64 m : {u64(5), u64(8), u64(12), u64(37)}) {
        double x = double(m) / 4.0;
        double jump = et::delta_star(x) - et::delta_star(x - 1e-9);
        double expect = ((m % 2 == 0) ? 0.5 : -0.5) * double(t.d[m]);
        CHECK(jump == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("circle error term at hand-checked points") {
    CHECK(et::circle_error(10.0) == doctest::Approx(5.5840735).epsilon(1e-6));
    CHECK(et::circle_error(0.5) == doctest::Approx(1.0 - 0.5 * 3.14159265358979324).epsilon(1e-9));
    CHECK(et::circle_error(2.0) == doctest::Approx(9.0 - 2.0 * 3.14159265358979324).epsilon(1e-9));
}

TEST_CASE("mean of delta is tiny relative to its spread") {
    // sum over a fixed pseudo-random sample in [10^6, 2*10^6]; the mean hovers
    // near 1/4 while the rms is ~x^{1/4} ~ 35.
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ux(1e6, 2e6);
    const int n = 4000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = et::delta(ux(rng));
        s += v;
        s2 += v * v;
    }
    double mean = s / n;
    double rms = std::sqrt(s2 / n);
    CHECK(rms > 5.0);
    CHECK(std::fabs(mean) < 0.15 * rms);
}
