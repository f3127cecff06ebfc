// Exercises the shared library through its C header only.

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tcsc/tcsc.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("tcsc_capi_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// Small generated config, written to disk.
fs::path small_config(const fs::path& dir) {
    const auto p = dir / "cfg.json";
    REQUIRE(tcsc_cmd_gen_config(p.c_str(), 2, 3, 21) == TCSC_OK);
    return p;
}

}  // namespace

TEST_CASE("version and overrides") {
    CHECK(std::string(tcsc_version()).size() > 0);
    tcsc_overrides o;
    tcsc_overrides_init(&o);
    CHECK(o.seed == -1);
    CHECK(o.time_limit_per_vehicle < 0);
    CHECK(o.gap_tol < 0);
}

TEST_CASE("null and malformed inputs map to status codes") {
    tcsc_instance* inst = nullptr;
    CHECK(tcsc_instance_load(nullptr, nullptr, &inst) == TCSC_ERR_USAGE);
    CHECK(std::string(tcsc_last_error()).find("null") != std::string::npos);
    CHECK(tcsc_instance_parse("{", nullptr, nullptr, &inst) == TCSC_ERR_PARSE);
    CHECK(tcsc_instance_parse("{\"bogus\": 1}", nullptr, nullptr, &inst) == TCSC_ERR_PARSE);
    CHECK(inst == nullptr);
    CHECK(tcsc_instance_load("/nonexistent/cfg.json", nullptr, &inst) == TCSC_ERR_IO);
    CHECK(tcsc_solve(nullptr, "no-heat", nullptr) == TCSC_ERR_USAGE);
    CHECK(tcsc_instance_vehicles(nullptr) == -1);
    tcsc_instance_free(nullptr);
    tcsc_schedule_free(nullptr);
}

TEST_CASE("load, solve and read back") {
    const auto dir = scratch("solve");
    const auto cfg = small_config(dir);
    tcsc_overrides o;
    tcsc_overrides_init(&o);
    o.seed = 4;
    tcsc_instance* inst = nullptr;
    REQUIRE(tcsc_instance_load(cfg.c_str(), &o, &inst) == TCSC_OK);
    CHECK(tcsc_instance_vehicles(inst) == 2);
    CHECK(tcsc_instance_scenarios(inst) == 3);
    const int T = tcsc_instance_steps(inst);
    CHECK(T == 60);

    tcsc_schedule* sch = nullptr;
    CHECK(tcsc_solve(inst, "heatwave", &sch) == TCSC_ERR_USAGE);
    CHECK(sch == nullptr);

    REQUIRE(tcsc_solve(inst, "smart-chg-heat", &sch) == TCSC_OK);
    tcsc_metrics m{};
    REQUIRE(tcsc_schedule_metrics(sch, &m) == TCSC_OK);
    CHECK(m.unmet_soc >= 0.0);
    CHECK(m.overhead_rate >= 0.0);
    CHECK(m.overhead_rate <= 100.0);
    CHECK(m.has_charging_cost == 1);

    std::vector<double> pc(T), ph(T);
    REQUIRE(tcsc_schedule_powers(sch, 0, 1, pc.data(), ph.data(), pc.size()) == TCSC_OK);
    double energy = 0.0;
    for (int t = 0; t < T; ++t) {
        CHECK(pc[t] >= -1e-9);
        CHECK(ph[t] >= -1e-9);
        energy += pc[t];
    }
    CHECK(energy > 0.0);
    CHECK(tcsc_schedule_powers(sch, 3, 0, pc.data(), ph.data(), pc.size()) == TCSC_ERR_USAGE);
    CHECK(tcsc_schedule_powers(sch, 0, 0, pc.data(), ph.data(), 5) == TCSC_ERR_USAGE);

    const auto out = dir / "sched.json";
    CHECK(tcsc_schedule_write_json(sch, out.c_str()) == TCSC_OK);
    CHECK(fs::file_size(out) > 0);
    tcsc_schedule_free(sch);
    tcsc_instance_free(inst);
}

TEST_CASE("drivers write their files") {
    const auto dir = scratch("drivers");
    const auto cfg = small_config(dir);
    CHECK(tcsc_cmd_compare(cfg.c_str(), "no-heat,instant-chg-heat", (dir / "cmp").c_str(), nullptr) == TCSC_OK);
    CHECK(fs::exists(dir / "cmp" / "metrics.csv"));
    const double shifts[] = {-3.0, 3.0};
    CHECK(tcsc_cmd_sweep(cfg.c_str(), shifts, 2, "no-heat", (dir / "sw").c_str(), nullptr) == TCSC_OK);
    CHECK(fs::exists(dir / "sw" / "slopes.csv"));
    CHECK(tcsc_cmd_sweep(cfg.c_str(), shifts, 0, "no-heat", (dir / "sw").c_str(), nullptr) == TCSC_ERR_USAGE);
    CHECK(tcsc_cmd_compare(cfg.c_str(), "nope", (dir / "x").c_str(), nullptr) == TCSC_ERR_USAGE);
    CHECK(tcsc_cmd_dump_lp(cfg.c_str(), (dir / "m.lp").c_str(), 0, nullptr) == TCSC_OK);
    std::ifstream lp(dir / "m.lp");
    std::string first;
    std::getline(lp, first);
    CHECK(first.rfind("\\", 0) == 0);
    CHECK(tcsc_cmd_gen_config((dir / "g.json").c_str(), 0, 3, 1) == TCSC_ERR_USAGE);
}
