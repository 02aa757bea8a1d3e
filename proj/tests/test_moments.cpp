// Moment integrals against closed-form first moments, a midpoint-rule
// oracle, route cross-checks, and the fitted exponents.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "divmom/arith.hpp"
#include "divmom/error_terms.hpp"
#include "divmom/moments.hpp"

using namespace divmom;
using moments::ERoute;
using moments::Target;

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;

// antiderivative of C - x(log x + 2 gamma - 1)
double anti_delta(double c, double x) {
    const double g = 2.0 * error_terms::euler_gamma - 1.0;
    return c * x - 0.5 * x * x * std::log(x) + 0.25 * x * x - 0.5 * g * x * x;
}

double anti_circle(double c, double x) { return c * x - 0.5 * pi * x * x; }

bool close_rel(double a, double b, double eps) {
    return std::fabs(a - b) <= eps * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

TEST_CASE("first moment matches the piecewise closed form") {
    // delta: unit pieces [n, n+1) carry the constant D(n)
    double want = 0.0;
    for (u64 n = 2; n <= 9; ++n) {
        const double c = static_cast<double>(arith::divisor_summatory(n));
        want += anti_delta(c, static_cast<double>(n + 1)) -
                anti_delta(c, static_cast<double>(n));
    }
    CHECK(close_rel(moments::moment_delta(1, 10.0, Target::delta), want, 1e-11));

    // circle: same layout with the lattice count and a linear main term
    want = 0.0;
    for (u64 n = 2; n <= 9; ++n) {
        const double c = static_cast<double>(arith::lattice_points_in_disk(
            static_cast<double>(n)));
        want += anti_circle(c, static_cast<double>(n + 1)) -
                anti_circle(c, static_cast<double>(n));
    }
    CHECK(close_rel(moments::moment_delta(1, 10.0, Target::circle), want, 1e-11));

    // alternating variant: quarter pieces, constant A(j)/2
    want = 0.0;
    for (u64 j = 8; j <= 39; ++j) {
        const double c = 0.5 * static_cast<double>(arith::alternating_divisor_summatory(j));
        want += anti_delta(c, static_cast<double>(j + 1) / 4.0) -
                anti_delta(c, static_cast<double>(j) / 4.0);
    }
    CHECK(close_rel(moments::moment_delta(1, 10.0, Target::delta_star), want, 1e-11));
}

TEST_CASE("second moment agrees with a fine midpoint rule") {
    const double T = 500.0;
    const int per_unit = 128;
    const double h = 1.0 / per_unit;
    double riemann = 0.0;
    const long steps = static_cast<long>((T - 2.0) * per_unit);
    for (long i = 0; i < steps; ++i) {
        const double x = 2.0 + (static_cast<double>(i) + 0.5) * h;
        const double d = error_terms::delta(x);
        riemann += d * d * h;
    }
    const double exact = moments::moment_delta(2, T, Target::delta);
    CHECK(close_rel(exact, riemann, 2e-3));
    CHECK(exact > 0.0);
}

TEST_CASE("even moments are nondecreasing in T") {
    double prev2 = 0.0, prev4 = 0.0;
    for (double t : {100.0, 200.0, 400.0, 800.0}) {
        const double m2 = moments::moment_delta(2, t, Target::delta);
        const double m4 = moments::moment_delta(4, t, Target::delta);
        CHECK(m2 >= prev2);
        CHECK(m4 >= prev4);
        prev2 = m2;
        prev4 = m4;
    }
    CHECK(moments::moment_delta(2, 300.0, Target::delta_star) > 0.0);
    CHECK(moments::moment_delta(4, 300.0, Target::circle) > 0.0);
}

TEST_CASE("results do not depend on the worker count") {
#ifdef _OPENMP
    omp_set_num_threads(3);
    const double a2 = moments::moment_delta(2, 2000.0, Target::delta);
    const double a4 = moments::moment_E(2, 300.0, ERoute::exact);
    omp_set_num_threads(1);
    const double b2 = moments::moment_delta(2, 2000.0, Target::delta);
    const double b4 = moments::moment_E(2, 300.0, ERoute::exact);
    omp_set_num_threads(omp_get_num_procs());
    CHECK(a2 == b2);
    CHECK(a4 == b4);
#endif
}

TEST_CASE("zeta mean-square routes agree where both are trusted") {
    const double ex = moments::moment_E(2, 1000.0, ERoute::exact);
    const double atk = moments::moment_E(2, 1000.0, ERoute::atkinson);
    CHECK(ex > 0.0);
    // the expansion's O(log^2 t) pointwise wobble enters the integrand as
    // 2 E(t) * err(t); with sign cancellation the measured gap is 5.1%
    CHECK(std::fabs(ex - atk) / ex < 0.10);
}

TEST_CASE("atkinson and proxy route exponents agree") {
    std::vector<double> ts{400.0, 700.0, 1000.0, 1500.0, 2000.0};
    std::vector<double> va, vp;
    for (double t : ts) {
        va.push_back(moments::moment_E(2, t, ERoute::atkinson));
        vp.push_back(moments::moment_E(2, t, ERoute::delta_star_proxy));
    }
    const auto fa = moments::fit_power_law(ts, va);
    const auto fp = moments::fit_power_law(ts, vp);
    // over a 5x window this far down, E's excursions still bend local fits;
    // both land near 3/2 and the measured difference is 0.17
    CHECK(fa.exponent > 1.2);
    CHECK(fa.exponent < 1.9);
    CHECK(fp.exponent > 1.2);
    CHECK(fp.exponent < 1.9);
    CHECK(std::fabs(fa.exponent - fp.exponent) < 0.25);
}

TEST_CASE("fourth-moment proxy tracks the exact route at mid scale") {
    const double ex = moments::moment_E(4, 2000.0, ERoute::exact);
    const double px = moments::moment_E(4, 2000.0, ERoute::delta_star_proxy);
    CHECK(ex > 0.0);
    CHECK(px / ex > 0.5);
    CHECK(px / ex < 2.0);
}

TEST_CASE("power-law fit recovers a synthetic law exactly") {
    std::vector<double> t{10.0, 100.0, 1000.0, 5000.0};
    std::vector<double> v;
    for (double x : t) v.push_back(3.7 * std::pow(x, 2.25));
    auto fit = moments::fit_power_law(t, v);
    CHECK(fit.exponent == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(fit.amplitude == doctest::Approx(3.7).epsilon(1e-9));

    CHECK_THROWS_AS((void)moments::fit_power_law({1.0, 2.0}, {1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)moments::fit_power_law({1.0, 2.0, 3.0}, {1.0, -2.0, 3.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)moments::fit_power_law({1.0, 2.0, 3.0}, {1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("predicted main terms carry the right constants") {
    const double p2 = moments::predicted_main_term(Target::delta, 2, 100.0);
    CHECK(p2 == doctest::Approx(0.65428397750884560 * 1000.0).epsilon(1e-12));
    CHECK(std::isnan(moments::predicted_main_term(Target::circle, 4, 100.0)));
    CHECK(std::isnan(moments::predicted_main_term(Target::delta_star, 3, 100.0)));
    const double c2_band = moments::predicted_main_term(Target::delta, 4, 1.0) *
                           64.0 * std::pow(pi, 4) / 3.0;
    CHECK(c2_band > 310.0);   // c2 truncated at 10^4 exceeds the Y=30 partial
    CHECK(c2_band < 3000.0);  // measured: 2264.4 at the 10^4 truncation
    const double pe = moments::predicted_main_term(Target::zeta_e, 4, 10.0);
    CHECK(pe == doctest::Approx(moments::predicted_main_term(Target::delta, 4, 10.0) *
                                8.0 * std::pow(pi, 3))
                    .epsilon(1e-12));
}

TEST_CASE("prediction tail hints mirror the prediction constants") {
    CHECK(moments::prediction_tail_hint(Target::delta, 2) == 0.0);
    CHECK(moments::prediction_tail_hint(Target::zeta_e, 2) == 0.0);
    const double h4 = moments::prediction_tail_hint(Target::delta, 4);
    CHECK(h4 > 0.3);  // measured 0.448: the truncated quartic constant
    CHECK(h4 < 0.7);  // sits ~45% under its tail-completed estimate
    CHECK(moments::prediction_tail_hint(Target::delta_star, 4) == h4);
    CHECK(moments::prediction_tail_hint(Target::zeta_e, 4) == h4);
    const double h3 = moments::prediction_tail_hint(Target::delta, 3);
    CHECK(h3 > 0.0);
    CHECK(h3 < 0.2);  // the cubic constant converges fast; heuristic 0.116
    // NaN exactly where predicted_main_term has no constant
    CHECK(std::isnan(moments::prediction_tail_hint(Target::circle, 4)));
    CHECK(std::isnan(moments::prediction_tail_hint(Target::delta_star, 3)));
    CHECK(std::isnan(moments::prediction_tail_hint(Target::delta, 1)));
}

TEST_CASE("asymptotic report wires values, ratios and fit together") {
    std::vector<double> grid{1000.0, 2000.0, 4000.0, 8000.0};
    auto rep = moments::asymptotic_report(Target::delta, 2, grid);
    CHECK(rep.tail_hint == moments::prediction_tail_hint(Target::delta, 2));
    REQUIRE(rep.values.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(rep.values[i] == moments::moment_delta(2, grid[i], Target::delta));
        CHECK(rep.ratios[i] ==
              doctest::Approx(rep.values[i] / rep.predicted[i]).epsilon(1e-15));
        CHECK(rep.ratios[i] > 0.5);
        CHECK(rep.ratios[i] < 1.5);
    }
    CHECK(rep.fitted_exponent > 1.3);
    CHECK(rep.fitted_exponent < 1.7);

    auto repc = moments::asymptotic_report(Target::circle, 2, {100.0, 200.0, 400.0});
    for (double r : repc.ratios) CHECK(std::isnan(r));
    CHECK(std::isnan(repc.tail_hint));
    CHECK_FALSE(std::isnan(repc.fitted_exponent));
}

TEST_CASE("guards reject bad orders, ranges and budgets") {
    CHECK_THROWS_AS((void)moments::moment_delta(0, 100.0, Target::delta),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)moments::moment_delta(5, 100.0, Target::delta),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)moments::moment_delta(2, 2.0, Target::delta),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)moments::moment_delta(2, 3.0e7, Target::delta),
                    resource_limit_error);
    CHECK_THROWS_AS((void)moments::moment_delta(2, 2.0e7, Target::delta_star),
                    resource_limit_error);
    CHECK_THROWS_AS((void)moments::moment_delta(2, 100.0, Target::zeta_e),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)moments::moment_E(3, 100.0, ERoute::exact),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)moments::moment_E(2, 5.0e4, ERoute::exact),
                    resource_limit_error);
    CHECK_THROWS_AS((void)moments::moment_E(2, 2.0e5, ERoute::atkinson),
                    resource_limit_error);
    CHECK_THROWS_AS((void)moments::asymptotic_report(Target::zeta_e, 3, {10.0, 20.0, 30.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)moments::asymptotic_report(Target::delta, 2, {100.0, 100.0}),
                    std::invalid_argument);
}
