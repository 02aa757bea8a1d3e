#include "divmom/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "divmom/arith.hpp"
#include "divmom/constants.hpp"
#include "divmom/error_terms.hpp"
#include "divmom/moments.hpp"
#include "divmom/spacing.hpp"
#include "divmom/voronoi.hpp"
#include "divmom/zeta.hpp"

namespace divmom::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double two_pi = 2.0 * pi;
constexpr int schema_version = 1;

// 17 significant digits: enough to round-trip any double.
std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_u(u64 v) { return std::to_string(v); }
std::string fmt_i(i64 v) { return std::to_string(v); }

struct CsvDoc {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const CsvDoc& doc) {
    for (std::size_t i = 0; i < doc.header.size(); ++i)
        os << (i ? "," : "") << doc.header[i];
    os << "\n";
    for (const auto& row : doc.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << row[i];
        os << "\n";
    }
}

struct Common {
    std::string output = "-";
    std::string format = "csv";
    int workers = 0;  // 0: fall back to DIVMOM_WORKERS, then the OpenMP default
    u64 seed = 12345;
    double budget_seconds = 0.0;  // 0: unlimited
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--output", c.output, "output path, '-' for stdout");
    cmd->add_option("--format", c.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", c.workers, "parallel worker count (flag beats DIVMOM_WORKERS)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "seed for every randomized draw");
    cmd->add_option("--budget-seconds", c.budget_seconds, "abort with exit 3 past this wall time")
        ->check(CLI::PositiveNumber);
}

void apply_workers(const Common& c) {
#ifdef _OPENMP
    int w = c.workers;
    if (w <= 0) {
        if (const char* env = std::getenv("DIVMOM_WORKERS")) w = std::atoi(env);
    }
    if (w > 0) omp_set_num_threads(w);
#else
    (void)c;
#endif
}

struct Budget {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds = 0.0;
    void check() const {
        if (seconds <= 0.0) return;
        const auto now = std::chrono::steady_clock::now();
        if (std::chrono::duration<double>(now - start).count() > seconds)
            throw resource_limit_error("time budget exceeded");
    }
};

template <typename Writer>
void with_sink(const Common& c, Writer&& w) {
    if (c.output == "-") {
        w(std::cout);
        std::cout.flush();
    } else {
        std::ofstream f(c.output);
        if (!f) throw std::invalid_argument("cannot open output path: " + c.output);
        w(f);
    }
}

json make_doc(const char* command, json parameters) {
    json doc;
    doc["schema_version"] = schema_version;
    doc["command"] = command;
    doc["parameters"] = std::move(parameters);
    doc["results"] = json::object();
    return doc;
}

void emit_json(std::ostream& os, const json& doc) { os << doc.dump(2) << "\n"; }

// Deterministic sample abscissae: log or linear lattice, or sorted random
// draws in the same scale.
std::vector<double> sample_points(double lo, double hi, int n, bool log_scale,
                                  bool random_draw, u64 seed) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("sample range must satisfy 0 < lo < hi");
    if (n < 1 || n > 100000) throw std::invalid_argument("samples must lie in 1..100000");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    const double a = log_scale ? std::log(lo) : lo;
    const double b = log_scale ? std::log(hi) : hi;
    if (random_draw) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(a, b);
        for (int i = 0; i < n; ++i) out.push_back(u(rng));
        std::sort(out.begin(), out.end());
    } else {
        for (int i = 0; i < n; ++i) {
            const double f = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
            out.push_back(a + (b - a) * f);
        }
    }
    if (log_scale)
        for (double& x : out) x = std::exp(x);
    return out;
}

// ---------------------------------------------------------------- tables

struct TablesOpts {
    u64 limit = 1000;
    u64 lo = 1;
};

void run_tables(const TablesOpts& o, const Common& c, Budget& budget) {
    if (o.limit < 1 || o.limit > 10000000ull)
        throw std::invalid_argument("tables: --limit must lie in 1..1e7");
    if (o.lo < 1 || o.lo > o.limit)
        throw std::invalid_argument("tables: --lo must lie in 1..limit");
    if (c.format == "json" && o.limit - o.lo + 1 > 100000ull)
        throw std::invalid_argument("tables: json format caps the row count at 1e5");
    auto t = arith::build_tables(o.limit);
    budget.check();
    with_sink(c, [&](std::ostream& os) {
        if (c.format == "csv") {
            CsvDoc doc;
            doc.header = {"n", "d", "mu", "kernel", "spf"};
            for (u64 n = o.lo; n <= o.limit; ++n) {
                if ((n & 0xffff) == 0) budget.check();
                doc.rows.push_back({fmt_u(n), fmt_u(t.d[n]), fmt_i(t.mu[n]),
                                    fmt_u(t.kernel[n]), fmt_u(t.spf[n])});
            }
            write_csv(os, doc);
        } else {
            json doc = make_doc("tables", {{"limit", o.limit}, {"lo", o.lo}});
            json rows = json::array();
            for (u64 n = o.lo; n <= o.limit; ++n)
                rows.push_back({{"n", n},
                                {"d", t.d[n]},
                                {"mu", t.mu[n]},
                                {"kernel", t.kernel[n]},
                                {"spf", t.spf[n]}});
            doc["results"]["rows"] = std::move(rows);
            emit_json(os, doc);
        }
    });
}

// ----------------------------------------------------------------- delta

struct DeltaOpts {
    double x_min = 2.0;
    double x_max = 1000.0;
    int samples = 50;
    std::string spacing = "log";
    bool random_draw = false;
};

void run_delta(const DeltaOpts& o, const Common& c, Budget& budget) {
    if (o.x_min < 1.0 || o.x_max > 1.0e12)
        throw std::invalid_argument("delta: need 1 <= x-min < x-max <= 1e12");
    auto xs = sample_points(o.x_min, o.x_max, o.samples, o.spacing == "log",
                            o.random_draw, c.seed);
    std::vector<std::array<double, 4>> rows;
    rows.reserve(xs.size());
    for (double x : xs) {
        budget.check();
        rows.push_back({x, error_terms::delta(x), error_terms::delta_star(x),
                        error_terms::circle_error(x)});
    }
    with_sink(c, [&](std::ostream& os) {
        if (c.format == "csv") {
            CsvDoc doc;
            doc.header = {"x", "delta", "delta_star", "circle_p"};
            for (const auto& r : rows)
                doc.rows.push_back({fmt(r[0]), fmt(r[1]), fmt(r[2]), fmt(r[3])});
            write_csv(os, doc);
        } else {
            json doc = make_doc("delta", {{"x_min", o.x_min},
                                          {"x_max", o.x_max},
                                          {"samples", o.samples},
                                          {"spacing", o.spacing},
                                          {"random", o.random_draw},
                                          {"seed", c.seed}});
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"x", r[0]},
                               {"delta", r[1]},
                               {"delta_star", r[2]},
                               {"circle_p", r[3]}});
            doc["results"]["rows"] = std::move(arr);
            emit_json(os, doc);
        }
    });
}

// ----------------------------------------------------------------- estar

struct EstarOpts {
    double t_min = 10.0;
    double t_max = 1000.0;
    int samples = 50;
    bool random_draw = false;
};

// E*(t) = E(t) - 2 pi Delta*(t / 2 pi): how much of E the alternating
// divisor term already explains.
void run_estar(const EstarOpts& o, const Common& c, Budget& budget) {
    if (o.t_min < 2.0 || o.t_max > 5.0e4)
        throw std::invalid_argument("estar: need 2 <= t-min < t-max <= 5e4");
    auto ts = sample_points(o.t_min, o.t_max, o.samples, true, o.random_draw, c.seed);
    std::vector<std::array<double, 4>> rows;
    for (double t : ts) {
        budget.check();
        const double e = zeta::e_exact(t);
        const double proxy = two_pi * error_terms::delta_star(t / two_pi);
        rows.push_back({t, e, proxy, e - proxy});
    }
    with_sink(c, [&](std::ostream& os) {
        if (c.format == "csv") {
            CsvDoc doc;
            doc.header = {"t", "e_exact", "proxy_2pi_delta_star", "e_star"};
            for (const auto& r : rows)
                doc.rows.push_back({fmt(r[0]), fmt(r[1]), fmt(r[2]), fmt(r[3])});
            write_csv(os, doc);
        } else {
            json doc = make_doc("estar", {{"t_min", o.t_min},
                                          {"t_max", o.t_max},
                                          {"samples", o.samples},
                                          {"random", o.random_draw},
                                          {"seed", c.seed}});
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"t", r[0]},
                               {"e_exact", r[1]},
                               {"proxy_2pi_delta_star", r[2]},
                               {"e_star", r[3]}});
            doc["results"]["rows"] = std::move(arr);
            emit_json(os, doc);
        }
    });
}

// --------------------------------------------------------------- spacing

struct SpacingOpts {
    std::string pattern = "++--";
    std::vector<u64> ranges;   // four dyadic N parameters
    std::vector<u64> boxes;    // four lo,hi pairs
    double delta = 0.0;
    bool exclude_zero = false;
    bool bucket = false;
    u64 min_gap_limit = 0;
    std::vector<double> fractional;  // alpha, beta, K, delta
};

spacing::Pattern parse_pattern(const std::string& s) {
    if (s == "++--") return spacing::Pattern::ppmm;
    if (s == "+++-") return spacing::Pattern::pppm;
    if (s == "++++") return spacing::Pattern::pppp;
    throw std::invalid_argument("spacing: --pattern must be ++--, +++- or ++++");
}

void run_spacing(const SpacingOpts& o, const Common& c, Budget& budget) {
    const auto pat = parse_pattern(o.pattern);
    const bool counting = o.delta > 0.0;
    if (!counting && o.min_gap_limit == 0 && o.fractional.empty())
        throw std::invalid_argument(
            "spacing: nothing to do (give --delta, --min-gap or --fractional)");
    if (counting && o.ranges.empty() == o.boxes.empty())
        throw std::invalid_argument("spacing: counting needs exactly one of --ranges / --boxes");

    spacing::SpacingInstance inst;
    inst.pattern = pat;
    inst.delta = o.delta;
    inst.exclude_zero = o.exclude_zero;
    if (!o.ranges.empty()) {
        if (o.ranges.size() != 4) throw std::invalid_argument("spacing: --ranges wants 4 values");
        for (int i = 0; i < 4; ++i) inst.ranges[i] = spacing::dyadic_range(o.ranges[i]);
    } else if (!o.boxes.empty()) {
        if (o.boxes.size() != 8) throw std::invalid_argument("spacing: --boxes wants 8 values");
        for (int i = 0; i < 4; ++i)
            inst.ranges[i] = spacing::box_range(o.boxes[2 * i], o.boxes[2 * i + 1]);
    }

    std::optional<spacing::SpacingCount> count;
    std::optional<spacing::SpacingBounds> bounds;
    std::optional<spacing::BucketBound> bucket;
    std::optional<spacing::GapResult> gap;
    std::optional<u64> frac;

    if (counting) {
        count = spacing::count_solutions(inst);
        bounds = spacing::spacing_bounds(inst);
        budget.check();
        if (o.bucket) {
            bucket = spacing::bucket_bound(inst);
            budget.check();
        }
    }
    if (o.min_gap_limit > 0) {
        gap = spacing::min_nonzero_gap(o.min_gap_limit, pat);
        budget.check();
    }
    if (!o.fractional.empty()) {
        if (o.fractional.size() != 4)
            throw std::invalid_argument("spacing: --fractional wants alpha,beta,K,delta");
        frac = spacing::fractional_count(o.fractional[0], o.fractional[1],
                                         static_cast<u64>(o.fractional[2]), o.fractional[3]);
        budget.check();
    }

    with_sink(c, [&](std::ostream& os) {
        if (c.format == "csv") {
            CsvDoc doc;
            doc.header = {"pattern", "delta", "exclude_zero", "count", "equality_count",
                          "equality_counted", "equal_range", "product_form",
                          "pair_difference", "triple_sum", "bucket_bound", "bucket_exact",
                          "min_gap", "min_gap_normalized", "w1", "w2", "w3", "w4",
                          "fractional_count"};
            std::vector<std::string> row(doc.header.size(), "");
            row[0] = o.pattern;
            row[1] = counting ? fmt(o.delta) : "";
            row[2] = counting ? (o.exclude_zero ? "1" : "0") : "";
            if (count) {
                row[3] = fmt_u(count->count);
                row[4] = count->equality_counted ? fmt_u(count->equality_count) : "";
                row[5] = count->equality_counted ? "1" : "0";
            }
            if (bounds) {
                if (bounds->equal_range) row[6] = fmt(*bounds->equal_range);
                if (bounds->product_form) row[7] = fmt(*bounds->product_form);
                if (bounds->pair_difference) row[8] = fmt(*bounds->pair_difference);
                if (bounds->triple_sum) row[9] = fmt(*bounds->triple_sum);
            }
            if (bucket) {
                row[10] = fmt(bucket->bound);
                row[11] = fmt_u(bucket->exact_count);
            }
            if (gap) {
                row[12] = fmt(gap->gap);
                row[13] = fmt(gap->normalized);
                for (int i = 0; i < 4; ++i) row[14 + i] = fmt_u(gap->witness[i]);
            }
            if (frac) row[18] = fmt_u(*frac);
            doc.rows.push_back(std::move(row));
            write_csv(os, doc);
        } else {
            json params = {{"pattern", o.pattern}};
            if (counting) {
                params["delta"] = o.delta;
                params["exclude_zero"] = o.exclude_zero;
                if (!o.ranges.empty()) params["ranges"] = o.ranges;
                if (!o.boxes.empty()) params["boxes"] = o.boxes;
            }
            if (o.min_gap_limit > 0) params["min_gap_limit"] = o.min_gap_limit;
            if (!o.fractional.empty()) params["fractional"] = o.fractional;
            json doc = make_doc("spacing", std::move(params));
            auto& res = doc["results"];
            if (count) {
                res["count"] = count->count;
                res["equality_counted"] = count->equality_counted;
                if (count->equality_counted) res["equality_count"] = count->equality_count;
            }
            if (bounds) {
                auto put = [&](const char* name, const std::optional<double>& v) {
                    res["bounds"][name] = v ? json(*v) : json(nullptr);
                };
                put("equal_range", bounds->equal_range);
                put("product_form", bounds->product_form);
                put("pair_difference", bounds->pair_difference);
                put("triple_sum", bounds->triple_sum);
            }
            if (bucket) {
                res["bucket"] = {{"bound", bucket->bound},
                                 {"exact_count", bucket->exact_count}};
            }
            if (gap) {
                res["min_gap"] = {{"gap", gap->gap},
                                  {"witness", gap->witness},
                                  {"normalized", gap->normalized}};
            }
            if (frac) res["fractional_count"] = *frac;
            emit_json(os, doc);
        }
    });
}

// ------------------------------------------------------------- constants

struct ConstantsOpts {
    u64 y = 10000;
    u64 growth_y = 100;
    std::vector<u32> c1_limits{300, 300, 300};
};

void run_constants(const ConstantsOpts& o, const Common& c, Budget& budget) {
    if (o.y < 1 || o.y > 30000)
        throw std::invalid_argument("constants: --y must lie in 1..30000");
    if (o.growth_y < 1 || o.growth_y > 100000)
        throw std::invalid_argument("constants: --growth-y must lie in 1..1e5");
    if (o.c1_limits.size() != 3)
        throw std::invalid_argument("constants: --c1-limits wants alpha,beta,h");

    auto tables = arith::build_tables(std::max(o.y, o.growth_y));
    struct Row {
        const char* name;
        constants::ConstantEstimate est;
    };
    std::vector<Row> rows;
    rows.push_back({"tong", {constants::tong_constant(), 0, 0.0, 0.0}});
    budget.check();
    rows.push_back({"c2", constants::c2_partial(o.y, tables)});
    budget.check();
    rows.push_back({"c2_star", constants::c2_star_partial(o.y, tables)});
    budget.check();
    rows.push_back({"c2_extrapolated", constants::c2_extrapolated(o.y, tables)});
    budget.check();
    rows.push_back({"c1", constants::c1_partial(
                              {o.c1_limits[0], o.c1_limits[1], o.c1_limits[2]})});
    budget.check();
    rows.push_back({"h1", constants::h1_sum(o.growth_y, tables)});
    budget.check();
    rows.push_back({"h2", constants::h2_sum(o.growth_y, tables)});
    budget.check();

    with_sink(c, [&](std::ostream& os) {
        if (c.format == "csv") {
            CsvDoc doc;
            doc.header = {"name", "value", "terms", "truncation", "tail_hint"};
            for (const auto& r : rows)
                doc.rows.push_back({r.name, fmt(r.est.value), fmt_u(r.est.term_count),
                                    fmt(r.est.truncation), fmt(r.est.tail_hint)});
            write_csv(os, doc);
        } else {
            json doc = make_doc("constants", {{"y", o.y},
                                              {"growth_y", o.growth_y},
                                              {"c1_limits", o.c1_limits}});
            for (const auto& r : rows)
                doc["results"][r.name] = {{"value", r.est.value},
                                          {"terms", r.est.term_count},
                                          {"truncation", r.est.truncation},
                                          {"tail_hint", r.est.tail_hint}};
            emit_json(os, doc);
        }
    });
}

// --------------------------------------------------------------- moments

struct MomentsOpts {
    std::string target = "delta";
    int k = 2;
    double t_max = 0.0;
    double t_min = 0.0;
    std::string grid = "dyadic";
    std::string route = "proxy";
    bool route_given = false;
};

void run_moments(const MomentsOpts& o, const Common& c, Budget& budget) {
    moments::Target target;
    if (o.target == "delta") target = moments::Target::delta;
    else if (o.target == "delta-star") target = moments::Target::delta_star;
    else if (o.target == "circle") target = moments::Target::circle;
    else if (o.target == "zeta-e") target = moments::Target::zeta_e;
    else throw std::invalid_argument("moments: unknown --target");
    if (o.route_given && target != moments::Target::zeta_e)
        throw std::invalid_argument("moments: --route applies to --target zeta-e only");
    if (!(o.t_max > 2.0)) throw std::invalid_argument("moments: --t-max must exceed 2");

    moments::ERoute route = moments::ERoute::delta_star_proxy;
    if (o.route == "exact") route = moments::ERoute::exact;
    else if (o.route == "atkinson") route = moments::ERoute::atkinson;
    else if (o.route != "proxy") throw std::invalid_argument("moments: unknown --route");

    std::vector<double> grid;
    if (o.grid == "single") {
        grid.push_back(o.t_max);
    } else if (o.grid == "dyadic") {
        double t0 = o.t_min > 0.0 ? o.t_min : o.t_max / 64.0;
        if (t0 <= 2.0) t0 = 4.0;
        if (t0 > o.t_max) throw std::invalid_argument("moments: --t-min must not exceed --t-max");
        for (double t = t0; t < o.t_max; t *= 2.0) grid.push_back(t);
        grid.push_back(o.t_max);
    } else {
        throw std::invalid_argument("moments: --grid must be dyadic or single");
    }

    const double tail_hint = moments::prediction_tail_hint(target, o.k);
    std::vector<double> values, predicted, ratios, fit_so_far;
    std::vector<double> pos_t, pos_v;
    for (double t : grid) {
        budget.check();
        const double v = (target == moments::Target::zeta_e)
                             ? moments::moment_E(o.k, t, route)
                             : moments::moment_delta(o.k, t, target);
        const double p = moments::predicted_main_term(target, o.k, t);
        values.push_back(v);
        predicted.push_back(p);
        ratios.push_back(v / p);
        if (v > 0.0) {
            pos_t.push_back(t);
            pos_v.push_back(v);
        }
        fit_so_far.push_back(pos_t.size() >= 3
                                 ? moments::fit_power_law(pos_t, pos_v).exponent
                                 : std::numeric_limits<double>::quiet_NaN());
    }

    with_sink(c, [&](std::ostream& os) {
        if (c.format == "csv") {
            CsvDoc doc;
            doc.header = {"T",     "moment",                 "predicted",
                          "ratio", "fitted_exponent_so_far", "tail_hint"};
            for (std::size_t i = 0; i < grid.size(); ++i)
                doc.rows.push_back({fmt(grid[i]), fmt(values[i]), fmt(predicted[i]),
                                    fmt(ratios[i]), fmt(fit_so_far[i]), fmt(tail_hint)});
            write_csv(os, doc);
        } else {
            json doc = make_doc("moments", {{"target", o.target},
                                            {"k", o.k},
                                            {"t_max", o.t_max},
                                            {"grid", o.grid},
                                            {"route", o.route}});
            auto& res = doc["results"];
            res["t_grid"] = grid;
            res["moments"] = values;
            res["predicted"] = predicted;
            res["ratios"] = ratios;
            if (std::isnan(tail_hint))
                res["tail_hint"] = nullptr;
            else
                res["tail_hint"] = tail_hint;
            if (pos_t.size() >= 3) {
                auto fit = moments::fit_power_law(pos_t, pos_v);
                res["fitted_exponent"] = fit.exponent;
                res["fitted_amplitude"] = fit.amplitude;
            } else {
                res["fitted_exponent"] = nullptr;
                res["fitted_amplitude"] = nullptr;
            }
            emit_json(os, doc);
        }
    });
}

// -------------------------------------------------------- atkinson-check

struct AtkinsonOpts {
    double t_min = 1000.0;
    double t_max = 10000.0;
    int samples = 50;
    double big_n_factor = 1.0;
    bool random_draw = false;
};

void run_atkinson_check(const AtkinsonOpts& o, const Common& c, Budget& budget) {
    if (o.t_min < 50.0 || o.t_max > 5.0e4)
        throw std::invalid_argument("atkinson-check: need 50 <= t-min < t-max <= 5e4");
    if (o.big_n_factor < 0.5 || o.big_n_factor > 4.0)
        throw std::invalid_argument("atkinson-check: --big-n-factor must lie in [0.5, 4]");
    auto ts = sample_points(o.t_min, o.t_max, o.samples, true, o.random_draw, c.seed);
    auto tables = arith::build_tables(
        static_cast<u64>(std::ceil(o.big_n_factor * o.t_max)) + 2);
    std::vector<std::array<double, 5>> rows;
    for (double t : ts) {
        budget.check();
        const double ex = zeta::e_exact(t);
        const u64 big_n = static_cast<u64>(std::ceil(o.big_n_factor * t));
        const double atk = zeta::atkinson_e(t, big_n, tables);
        const double lg = std::log(t);
        rows.push_back({t, ex, atk, ex - atk, (ex - atk) / (lg * lg)});
    }
    with_sink(c, [&](std::ostream& os) {
        if (c.format == "csv") {
            CsvDoc doc;
            doc.header = {"t", "E_exact", "E_atkinson", "residual", "residual_over_log2t"};
            for (const auto& r : rows)
                doc.rows.push_back({fmt(r[0]), fmt(r[1]), fmt(r[2]), fmt(r[3]), fmt(r[4])});
            write_csv(os, doc);
        } else {
            json doc = make_doc("atkinson-check", {{"t_min", o.t_min},
                                                   {"t_max", o.t_max},
                                                   {"samples", o.samples},
                                                   {"big_n_factor", o.big_n_factor},
                                                   {"random", o.random_draw},
                                                   {"seed", c.seed}});
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"t", r[0]},
                               {"E_exact", r[1]},
                               {"E_atkinson", r[2]},
                               {"residual", r[3]},
                               {"residual_over_log2t", r[4]}});
            doc["results"]["rows"] = std::move(arr);
            emit_json(os, doc);
        }
    });
}

// --------------------------------------------------------- voronoi-check

struct VoronoiOpts {
    double x_min = 10.0;
    double x_max = 10000.0;
    int samples = 20;
    u64 terms = 0;  // 0: classical cutoff per sample
    bool random_draw = false;
};

void run_voronoi_check(const VoronoiOpts& o, const Common& c, Budget& budget) {
    if (o.x_min < 1.0 || o.x_max > 1.0e8)
        throw std::invalid_argument("voronoi-check: need 1 <= x-min < x-max <= 1e8");
    auto xs = sample_points(o.x_min, o.x_max, o.samples, true, o.random_draw, c.seed);
    u64 max_terms = o.terms;
    if (max_terms == 0)
        for (double x : xs) max_terms = std::max(max_terms, voronoi::default_cutoff(x));
    if (max_terms > 2000000ull)
        throw resource_limit_error("voronoi-check: series length beyond budget");
    auto tables = arith::build_tables(max_terms + 1);
    std::vector<std::array<double, 7>> rows;
    for (double x : xs) {
        budget.check();
        const u64 n = o.terms ? o.terms : voronoi::default_cutoff(x);
        const double ex = error_terms::delta(x);
        const double tr = voronoi::voronoi_delta(x, n, tables);
        const double exs = error_terms::delta_star(x);
        const double trs = voronoi::voronoi_delta_star(x, n, tables);
        rows.push_back({x, ex, tr, ex - tr, exs, trs, exs - trs});
    }
    with_sink(c, [&](std::ostream& os) {
        if (c.format == "csv") {
            CsvDoc doc;
            doc.header = {"x", "delta_exact", "delta_series", "residual",
                          "delta_star_exact", "delta_star_series", "residual_star"};
            for (const auto& r : rows)
                doc.rows.push_back({fmt(r[0]), fmt(r[1]), fmt(r[2]), fmt(r[3]),
                                    fmt(r[4]), fmt(r[5]), fmt(r[6])});
            write_csv(os, doc);
        } else {
            json doc = make_doc("voronoi-check", {{"x_min", o.x_min},
                                                  {"x_max", o.x_max},
                                                  {"samples", o.samples},
                                                  {"terms", o.terms},
                                                  {"random", o.random_draw},
                                                  {"seed", c.seed}});
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"x", r[0]},
                               {"delta_exact", r[1]},
                               {"delta_series", r[2]},
                               {"residual", r[3]},
                               {"delta_star_exact", r[4]},
                               {"delta_star_series", r[5]},
                               {"residual_star", r[6]}});
            doc["results"]["rows"] = std::move(arr);
            emit_json(os, doc);
        }
    });
}

void emit_error(const char* category, const std::string& what) {
    json rec = {{"error", what}, {"category", category}};
    std::cerr << rec.dump() << "\n";
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"divisor and zeta error-term laboratory"};
    app.require_subcommand(1);

    Common common;
    TablesOpts tab;
    DeltaOpts del;
    EstarOpts est;
    SpacingOpts spc;
    ConstantsOpts cst;
    MomentsOpts mom;
    AtkinsonOpts atk;
    VoronoiOpts vor;
    Budget budget;

    auto* c_tab = app.add_subcommand("tables", "emit sieved d/mu/kernel/spf tables");
    c_tab->add_option("--limit", tab.limit, "sieve upper bound");
    c_tab->add_option("--lo", tab.lo, "first row to emit");
    add_common(c_tab, common);

    auto* c_del = app.add_subcommand("delta", "sample the three error terms");
    c_del->add_option("--x-min", del.x_min);
    c_del->add_option("--x-max", del.x_max);
    c_del->add_option("--samples", del.samples);
    c_del->add_option("--spacing", del.spacing)->check(CLI::IsMember({"log", "linear"}));
    c_del->add_flag("--random", del.random_draw, "draw x uniformly (in the chosen scale)");
    add_common(c_del, common);

    auto* c_est = app.add_subcommand(
        "estar", "E(t) against its alternating-divisor proxy 2pi Delta*(t/2pi)");
    c_est->add_option("--t-min", est.t_min);
    c_est->add_option("--t-max", est.t_max);
    c_est->add_option("--samples", est.samples);
    c_est->add_flag("--random", est.random_draw);
    add_common(c_est, common);

    auto* c_spc = app.add_subcommand("spacing", "square-root spacing counts and bounds");
    c_spc->add_option("--pattern", spc.pattern, "++--, +++- or ++++");
    c_spc->add_option("--ranges", spc.ranges, "four dyadic N parameters")->delimiter(',');
    c_spc->add_option("--boxes", spc.boxes, "lo,hi per variable (8 values)")->delimiter(',');
    c_spc->add_option("--delta", spc.delta, "count |sum| < delta");
    c_spc->add_flag("--exclude-zero", spc.exclude_zero, "drop exact equalities");
    c_spc->add_flag("--bucket", spc.bucket, "also evaluate the bucket bound");
    c_spc->add_option("--min-gap", spc.min_gap_limit, "smallest nonzero gap up to this limit");
    c_spc->add_option("--fractional", spc.fractional, "alpha,beta,K,delta scan")->delimiter(',');
    add_common(c_spc, common);

    auto* c_cst = app.add_subcommand("constants", "moment constants and growth sums");
    c_cst->add_option("--y", cst.y, "truncation for c2 / c2*");
    c_cst->add_option("--growth-y", cst.growth_y, "truncation for h1 / h2");
    c_cst->add_option("--c1-limits", cst.c1_limits, "alpha,beta,h caps for c1")->delimiter(',');
    add_common(c_cst, common);

    auto* c_mom = app.add_subcommand("moments", "power-moment sweep against main terms");
    c_mom->add_option("--target", mom.target, "delta, delta-star, circle or zeta-e");
    c_mom->add_option("--k", mom.k, "moment order");
    c_mom->add_option("--t-max", mom.t_max)->required();
    c_mom->add_option("--t-min", mom.t_min, "first dyadic point (default t-max/64)");
    c_mom->add_option("--grid", mom.grid)->check(CLI::IsMember({"dyadic", "single"}));
    c_mom->add_option("--route", mom.route, "zeta-e only: exact, atkinson or proxy")
        ->check(CLI::IsMember({"exact", "atkinson", "proxy"}))
        ->each([&](const std::string&) { mom.route_given = true; });
    add_common(c_mom, common);

    auto* c_atk = app.add_subcommand("atkinson-check",
                                     "E exact vs the truncated two-sum formula");
    c_atk->add_option("--t-min", atk.t_min);
    c_atk->add_option("--t-max", atk.t_max);
    c_atk->add_option("--samples", atk.samples);
    c_atk->add_option("--big-n-factor", atk.big_n_factor, "N = ceil(factor * t)");
    c_atk->add_flag("--random", atk.random_draw);
    add_common(c_atk, common);

    auto* c_vor = app.add_subcommand("voronoi-check",
                                     "error terms vs their truncated series");
    c_vor->add_option("--x-min", vor.x_min);
    c_vor->add_option("--x-max", vor.x_max);
    c_vor->add_option("--samples", vor.samples);
    c_vor->add_option("--terms", vor.terms, "fixed series length (default: classical cutoff)");
    c_vor->add_flag("--random", vor.random_draw);
    add_common(c_vor, common);

    c_tab->callback([&] { apply_workers(common); budget.seconds = common.budget_seconds; run_tables(tab, common, budget); });
    c_del->callback([&] { apply_workers(common); budget.seconds = common.budget_seconds; run_delta(del, common, budget); });
    c_est->callback([&] { apply_workers(common); budget.seconds = common.budget_seconds; run_estar(est, common, budget); });
    c_spc->callback([&] { apply_workers(common); budget.seconds = common.budget_seconds; run_spacing(spc, common, budget); });
    c_cst->callback([&] { apply_workers(common); budget.seconds = common.budget_seconds; run_constants(cst, common, budget); });
    c_mom->callback([&] { apply_workers(common); budget.seconds = common.budget_seconds; run_moments(mom, common, budget); });
    c_atk->callback([&] { apply_workers(common); budget.seconds = common.budget_seconds; run_atkinson_check(atk, common, budget); });
    c_vor->callback([&] { apply_workers(common); budget.seconds = common.budget_seconds; run_voronoi_check(vor, common, budget); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        emit_error("invalid", e.what());
        std::cerr << app.help() << std::flush;
        return 2;
    } catch (const resource_limit_error& e) {
        emit_error("resource", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        emit_error("invalid", e.what());
        std::cerr << app.help() << std::flush;
        return 2;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 4;
    }
    return 0;
}

} // namespace divmom::cli
