#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "fixtures.hpp"
#include "tcsc/baselines.hpp"
#include "tcsc/metrics.hpp"

using namespace tcsc;

namespace {

// One vehicle, two half-hour steps, one scenario.
struct Tiny {
    StationModel m;
    ScenarioSet s;
    Tiny() {
        m.grid = {7.0, 2, 0.5};
        m.tariff.price = {10.0, 20.0};
        m.pg_max = 10.0;
        VehicleSpec v;
        v.id = "a";
        v.capacity = 10.0;
        v.soc_arr = 0.5;
        v.ta = 0;
        v.td = 2;
        m.fleet = {v};
        s.prob = {1.0};
        s.pv_cap = {{1.0, 1.0}};
        s.temp_amb = {{0.0, 0.0}};
    }
    Schedule run() const {
        return replay_here_and_now(m, s, {{2.0, 0.0}}, {{0.0, 1.0}}, "hand");
    }
};

}  // namespace

TEST_CASE("metrics on a hand-computed schedule") {
    Tiny t;
    const auto r = compute_metrics(t.run(), t.m, t.s);
    // grid draw: step 0 buys 2 - 1 kW for half an hour at 10 c/kWh
    CHECK(r.expected_cost == doctest::Approx(5.0));
    CHECK(r.stored_energy == doctest::Approx(0.92 * 2.0 * 0.5));
    REQUIRE(r.charging_cost);
    CHECK(*r.charging_cost == doctest::Approx(5.0 / 0.92));
    CHECK(r.overhead_rate == doctest::Approx(100.0 / 3.0));
    CHECK(r.solar_usage_rate == doctest::Approx(100.0));
    CHECK(r.unmet_soc == doctest::Approx(0.9 - 0.592));

    const auto plug = compute_metrics(t.run(), t.m, t.s, CostBasis::Plug);
    CHECK(*plug.charging_cost == doctest::Approx(5.0));
}

TEST_CASE("no charging gives an empty cost") {
    Tiny t;
    const auto sch = replay_here_and_now(t.m, t.s, {{0.0, 0.0}}, {{0.0, 0.0}}, "idle");
    const auto r = compute_metrics(sch, t.m, t.s);
    CHECK_FALSE(r.charging_cost.has_value());
    CHECK(r.overhead_rate == 0.0);
    CHECK(r.solar_usage_rate == 0.0);

    std::ostringstream os;
    write_metrics_csv(os, {r});
    CHECK(os.str().find(",NA,") != std::string::npos);
}

TEST_CASE("metrics are invariant to scenario order") {
    const auto m = fixture::small_station(3, 16, 5);
    auto s = fixture::small_scenarios(m, 4, 9);
    s.prob = {0.1, 0.2, 0.3, 0.4};
    const auto a = compute_metrics(run_instant_chg_heat(m, s), m, s);
    ScenarioSet p;
    for (int w : {2, 0, 3, 1}) {
        p.prob.push_back(s.prob[w]);
        p.pv_cap.push_back(s.pv_cap[w]);
        p.temp_amb.push_back(s.temp_amb[w]);
    }
    const auto b = compute_metrics(run_instant_chg_heat(m, p), m, p);
    CHECK(a.unmet_soc == doctest::Approx(b.unmet_soc).epsilon(1e-12));
    CHECK(*a.charging_cost == doctest::Approx(*b.charging_cost).epsilon(1e-12));
    CHECK(a.overhead_rate == doctest::Approx(b.overhead_rate).epsilon(1e-12));
    CHECK(a.solar_usage_rate == doctest::Approx(b.solar_usage_rate).epsilon(1e-12));
}

TEST_CASE("metrics ranges hold for every scheme") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto m = fixture::small_station(3, 20, seed);
        const auto s = fixture::small_scenarios(m, 3, seed + 100);
        for (const auto& sch : {run_smart_chg_heat(m, s), run_instant_chg_heat(m, s), run_no_heat(m, s)}) {
            const auto r = compute_metrics(sch, m, s);
            CHECK(r.unmet_soc >= 0.0);
            CHECK(r.overhead_rate >= 0.0);
            CHECK(r.overhead_rate <= 100.0);
            CHECK(r.solar_usage_rate >= 0.0);
            CHECK(r.solar_usage_rate <= 100.0 + 1e-9);
        }
    }
}

TEST_CASE("metrics json round trip") {
    Tiny t;
    auto a = compute_metrics(t.run(), t.m, t.s);
    a.scheme = "hand";
    a.instance = "tiny";
    auto b = compute_metrics(replay_here_and_now(t.m, t.s, {{0.0, 0.0}}, {{0.0, 0.0}}, "idle"), t.m, t.s);
    std::stringstream ss;
    write_metrics_json(ss, {a, b});
    const auto back = read_metrics_json(ss);
    REQUIRE(back.size() == 2);
    CHECK(back[0].scheme == "hand");
    CHECK(back[0].instance == "tiny");
    CHECK(back[0].unmet_soc == a.unmet_soc);
    CHECK(*back[0].charging_cost == *a.charging_cost);
    CHECK(back[0].overhead_rate == a.overhead_rate);
    CHECK_FALSE(back[1].charging_cost.has_value());
}
