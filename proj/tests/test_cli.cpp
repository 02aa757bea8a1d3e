// End-to-end checks of the command-line tool: headers, exit codes, seeds,
// worker-count determinism, and JSON shape against known constants.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::path("test_cli_tmp");
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string("\"") + DIVMOM_CLI_PATH + "\" " + args +
                            " > " + out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (rc == -1) ? -1 : WEXITSTATUS(rc);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string first_line(const std::string& s) {
    const auto pos = s.find('\n');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

std::size_t line_count(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("delta command emits the documented CSV") {
    auto r = run("delta --x-min 10 --x-max 1000 --samples 5");
    REQUIRE(r.exit_code == 0);
    CHECK(first_line(r.out) == "x,delta,delta_star,circle_p");
    CHECK(line_count(r.out) == 6);
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("help exits zero, bad invocations exit two") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("moments --target delta --k 2").exit_code == 2);  // missing --t-max
    CHECK(run("moments --target delta --k 9 --t-max 100").exit_code == 2);
    CHECK(run("frobnicate --x 1").exit_code == 2);
    CHECK(run("delta --x-min 5 --x-max 2 --samples 3").exit_code == 2);
    auto r = run("spacing --pattern ++x- --ranges 4,4,4,4 --delta 0.1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("\"category\":\"invalid\"") != std::string::npos);
}

TEST_CASE("resource limits exit three") {
    auto r = run("moments --target delta --k 2 --t-max 3e7 --grid single");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("\"category\":\"resource\"") != std::string::npos);
    CHECK(run("tables --limit 3000000 --budget-seconds 0.001 --output test_cli_tmp/t.csv")
              .exit_code == 3);
}

TEST_CASE("identical bytes across worker counts") {
    const std::string args =
        "moments --target delta --k 2 --t-max 20000 --t-min 2500 --grid dyadic";
    auto w1 = run(args + " --workers 1");
    auto w4 = run(args + " --workers 4");
    auto w8 = run(args + " --workers 8");
    REQUIRE(w1.exit_code == 0);
    CHECK(first_line(w1.out) == "T,moment,predicted,ratio,fitted_exponent_so_far,tail_hint");
    CHECK(w1.out == w4.out);
    CHECK(w1.out == w8.out);
}

TEST_CASE("seed drives the random draws") {
    const std::string args = "delta --x-min 10 --x-max 1e6 --samples 20 --random";
    auto a = run(args + " --seed 7");
    auto b = run(args + " --seed 7");
    auto c = run(args + " --seed 8");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
}

TEST_CASE("output file sink leaves stdout empty") {
    auto r = run("delta --x-max 100 --samples 3 --output test_cli_tmp/rows.csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(first_line(slurp("test_cli_tmp/rows.csv")) == "x,delta,delta_star,circle_p");
}

TEST_CASE("spacing json carries count and all four bound slots") {
    auto r = run("spacing --pattern ++-- --ranges 10,10,10,10 --delta 1e-9 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["command"] == "spacing");
    CHECK(doc["results"]["count"] == 190);
    CHECK(doc["results"]["equality_count"] == 190);
    auto& b = doc["results"]["bounds"];
    CHECK(b["equal_range"].is_number());
    CHECK(b["product_form"].is_number());
    CHECK(b["pair_difference"].is_number());
    CHECK(b["triple_sum"].is_null());
}

TEST_CASE("spacing min-gap and fractional modes work standalone") {
    auto r = run("spacing --pattern ++-- --min-gap 5 --fractional 2,0.3,1000,0.05 "
                 "--format json");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["results"]["min_gap"]["witness"] == json::array({3, 5, 4, 4}));
    CHECK(doc["results"]["fractional_count"] == 101);
    CHECK(doc["results"].find("count") == doc["results"].end());
}

TEST_CASE("constants json reproduces the frozen solution-set values") {
    auto r = run("constants --y 30 --growth-y 36 --c1-limits 5,5,5 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::abs(b); };
    CHECK(near(doc["results"]["tong"]["value"].get<double>(), 0.65428397750884560375));
    CHECK(near(doc["results"]["c2"]["value"].get<double>(), 310.901117635964525));
    // same sum accumulated in a different order (closed-form permutation
    // part vs per-pair signs), so equality holds to rounding, not bitwise
    CHECK(near(doc["results"]["c2_star"]["value"].get<double>(),
               doc["results"]["c2"]["value"].get<double>()));
    CHECK(near(doc["results"]["c1"]["value"].get<double>(), 16.4587673014480056));
    CHECK(near(doc["results"]["h2"]["value"].get<double>(), 1614.18896647244169));
    CHECK(doc["results"]["h2"]["terms"] == 25);
}

TEST_CASE("check commands run end to end on small inputs") {
    auto v = run("voronoi-check --x-min 50 --x-max 100 --samples 2");
    REQUIRE(v.exit_code == 0);
    CHECK(first_line(v.out) ==
          "x,delta_exact,delta_series,residual,delta_star_exact,delta_star_series,"
          "residual_star");
    auto a = run("atkinson-check --t-min 100 --t-max 200 --samples 2");
    REQUIRE(a.exit_code == 0);
    CHECK(first_line(a.out) == "t,E_exact,E_atkinson,residual,residual_over_log2t");
    CHECK(line_count(a.out) == 3);
    auto e = run("estar --t-min 10 --t-max 40 --samples 3");
    REQUIRE(e.exit_code == 0);
    CHECK(first_line(e.out) == "t,e_exact,proxy_2pi_delta_star,e_star");
}

TEST_CASE("tables command round-trips the sieve") {
    auto r = run("tables --limit 12 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    auto& rows = doc["results"]["rows"];
    REQUIRE(rows.size() == 12);
    CHECK(rows[11]["n"] == 12);
    CHECK(rows[11]["d"] == 6);
    CHECK(rows[11]["mu"] == 0);
    CHECK(rows[11]["kernel"] == 3);
    CHECK(rows[11]["spf"] == 2);
}

TEST_CASE("committed fixtures regenerate byte-identically") {
    // command list mirrors fixtures/regenerate.sh
    const std::pair<const char*, const char*> fixtures[] = {
        {"tables_limit50.csv", "tables --limit 50"},
        {"delta_sweep.csv", "delta --x-min 10 --x-max 1000 --samples 12"},
        {"estar_small.csv", "estar --t-min 20 --t-max 60 --samples 5"},
        {"spacing_dyadic10.csv",
         "spacing --pattern ++-- --ranges 10,10,10,10 --delta 0.05 --bucket --min-gap 5"},
        {"constants_y10000.csv", "constants --y 10000 --growth-y 100 --c1-limits 5,5,5"},
        {"voronoi_check.csv", "voronoi-check --x-min 10 --x-max 200 --samples 6 --terms 400"},
    };
    for (const auto& [name, args] : fixtures) {
        const fs::path golden = fs::path(DIVMOM_FIXTURE_DIR) / name;
        const fs::path fresh = fs::path("test_cli_tmp") / name;
        auto r = run(std::string(args) + " --output " + fresh.string());
        REQUIRE_MESSAGE(r.exit_code == 0, name);
        CHECK_MESSAGE(slurp(fresh) == slurp(golden), name);
    }
}
