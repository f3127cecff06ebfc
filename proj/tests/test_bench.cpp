#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "tcsc/bench.hpp"
#include "tcsc/lp.hpp"

using namespace tcsc;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("tcsc_bench_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Short horizon, few scenarios, small decentralized budget.
json small_json(int n, int w, std::uint64_t seed) {
    auto j = json::parse(default_config_json(n, w, seed));
    j["horizon"]["start_hour"] = 9.0;
    j["horizon"]["n_steps"] = 24;
    j["horizon"]["dt_hours"] = 0.25;
    j["fleet"]["arrival_hours"] = {9.0, 10.0};
    j["fleet"]["departure_hours"] = {13.0, 15.0};
    j["decentral"]["n_iter"] = 8;
    j["solver"]["time_limit_per_vehicle"] = 20.0;
    return j;
}

Config small(int n, int w, std::uint64_t seed) { return parse_config(small_json(n, w, seed).dump()); }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("generated config round trips") {
    const auto c = parse_config(default_config_json(3, 4, 7));
    CHECK(c.n_vehicles == 3);
    CHECK(c.n_scenarios == 4);
    CHECK(c.seed == 7u);
    const auto inst = build_instance(c);
    CHECK(inst.model.n() == 3);
    CHECK(inst.scenarios.size() == 4);
    CHECK(inst.model.grid.n_steps == 60);
}

TEST_CASE("config rejects unknown keys and wrong types") {
    auto j = json::parse(default_config_json());
    SUBCASE("top level") {
        j["colour"] = "blue";
        try {
            parse_config(j.dump());
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Parse);
            CHECK(std::string(e.what()).find("colour") != std::string::npos);
        }
    }
    SUBCASE("nested") {
        j["thermal"]["T_sett"] = 14.0;
        CHECK(code_of([&] { parse_config(j.dump()); }) == ErrorCode::Parse);
    }
    SUBCASE("wrong type") {
        j["fleet"]["vehicles"] = "three";
        CHECK(code_of([&] { parse_config(j.dump()); }) == ErrorCode::Parse);
    }
    SUBCASE("not json") { CHECK(code_of([&] { parse_config("{ \"seed\": "); }) == ErrorCode::Parse); }
    SUBCASE("missing file") {
        CHECK(code_of([&] { load_config("/nonexistent/tcsc.json"); }) == ErrorCode::Io);
    }
}

TEST_CASE("relative series paths resolve against the config directory") {
    const auto dir = scratch("paths");
    std::string body = "timestamp,kw\n";
    for (int k = 0; k < 24; ++k) {
        char ts[32];
        std::snprintf(ts, sizeof ts, "2023-01-15 %02d:%02d", 9 + k / 4, 15 * (k % 4));
        body += std::string(ts) + "," + std::to_string(k < 12 ? k : 24 - k) + "\n";
    }
    std::ofstream(dir / "pv.csv") << body;
    auto j = small_json(2, 2, 3);
    j["solar"]["csv"] = "pv.csv";
    j["solar"]["scale_up"] = false;
    j["solar"]["max_fraction"] = 100.0;
    std::ofstream(dir / "cfg.json") << j.dump();
    const auto inst = build_instance(load_config(dir / "cfg.json"));
    // max over scenarios of the noisy profile is near the raw peak of 12
    double peak = 0.0;
    for (const auto& row : inst.scenarios.pv_cap)
        for (double v : row) peak = std::max(peak, v);
    CHECK(peak > 9.0);
    CHECK(peak < 15.0);

    j["solar"]["csv"] = "absent.csv";
    std::ofstream(dir / "cfg.json") << j.dump();
    CHECK(code_of([&] { build_instance(load_config(dir / "cfg.json")); }) == ErrorCode::Io);
}

TEST_CASE("scheme lists") {
    CHECK(parse_schemes("all") == scheme_names());
    CHECK(parse_schemes("no-heat,smart-chg-heat") == std::vector<std::string>{"no-heat", "smart-chg-heat"});
    CHECK(code_of([] { parse_schemes("tcsc-central,heatwave"); }) == ErrorCode::Usage);
    CHECK(code_of([] { parse_schemes(""); }) == ErrorCode::Usage);
}

TEST_CASE("least squares slope") {
    CHECK(ls_slope({1, 2, 3}, {3, 5, 7}) == doctest::Approx(2.0));
    CHECK(ls_slope({2, 2}, {1, 9}) == 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int k = 0; k < 100; ++k) {
        const double a = u(rng), b = u(rng);
        std::vector<double> x, y;
        for (int i = 0; i < 2 + k % 6; ++i) {
            x.push_back(u(rng));
            y.push_back(a * x.back() + b);
        }
        CHECK(ls_slope(x, y) == doctest::Approx(a).epsilon(1e-6));
    }
}

TEST_CASE("compare with one scheme gives one row") {
    const auto dir = scratch("one");
    const auto r = cmd_compare(small(2, 3, 4), {"instant-chg-heat"}, dir);
    REQUIRE(r.rows.size() == 1u);
    CHECK(r.rows[0].scheme == "instant-chg-heat");
    const auto csv = slurp(dir / "metrics.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(fs::exists(dir / "metrics.json"));
    CHECK(fs::exists(dir / "schedule_instant-chg-heat.json"));
}

TEST_CASE("identical seeds give identical outputs") {
    const auto a = scratch("seed_a"), b = scratch("seed_b"), c = scratch("seed_c");
    const auto schemes = parse_schemes("all");
    cmd_compare(small(2, 3, 11), schemes, a);
    cmd_compare(small(2, 3, 11), schemes, b);
    cmd_compare(small(2, 3, 12), schemes, c);
    CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
    CHECK(slurp(a / "schedule_tcsc-central.json") == slurp(b / "schedule_tcsc-central.json"));
    CHECK(slurp(a / "schedule_tcsc-decent.json") == slurp(b / "schedule_tcsc-decent.json"));
    CHECK(slurp(a / "metrics.csv") != slurp(c / "metrics.csv"));
}

TEST_CASE("sweep at zero shift reproduces compare") {
    const auto c = small(2, 3, 5);
    const std::vector<std::string> schemes{"tcsc-central", "smart-chg-heat", "no-heat"};
    const auto cmp = cmd_compare(c, schemes);
    const auto sw = cmd_sweep(c, {-3.0, 0.0}, schemes);
    REQUIRE(sw.rows.size() == 6u);
    REQUIRE(sw.slopes.size() == 3u);
    for (const auto& row : sw.rows) {
        if (row.shift != 0.0) continue;
        const auto& m = *std::find_if(cmp.rows.begin(), cmp.rows.end(),
                                      [&](const MetricsReport& r) { return r.scheme == row.scheme; });
        CHECK(row.metrics.unmet_soc == doctest::Approx(m.unmet_soc).epsilon(1e-9));
        CHECK(row.metrics.expected_cost == doctest::Approx(m.expected_cost).epsilon(1e-9));
        CHECK(row.metrics.overhead_rate == doctest::Approx(m.overhead_rate).epsilon(1e-9));
    }
    for (const auto& s : sw.slopes)
        if (s.scheme == "no-heat") CHECK(s.overhead_slope == 0.0);
}

TEST_CASE("scale with one vehicle: decentralized matches central") {
    const auto dir = scratch("scale");
    const auto rows = cmd_scale(small(1, 3, 9), {1}, {3}, dir);
    REQUIRE(rows.size() == 2u);
    const auto& central = rows[0].scheme == "tcsc-central" ? rows[0] : rows[1];
    const auto& decent = rows[0].scheme == "tcsc-central" ? rows[1] : rows[0];
    CHECK(central.status == "optimal");
    CHECK(std::abs(decent.objective - central.objective) <= 1e-4 * std::max(1.0, std::abs(central.objective)));
    CHECK(fs::exists(dir / "scale.csv"));
}

TEST_CASE("lp dump parses back") {
    const auto c = small(2, 2, 6);
    for (bool full : {false, true}) {
        std::stringstream ss;
        dump_lp(c, ss, full);
        std::vector<int> bins;
        const auto p = lp::read_lp_format(ss, &bins);
        CHECK(p.n_vars > 0);
        CHECK(p.n_rows() > 0);
        CHECK(!bins.empty());
    }
}
