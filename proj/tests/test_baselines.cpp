#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "tcsc/baselines.hpp"
#include "tcsc/metrics.hpp"

using namespace tcsc;

namespace {

void warm(ScenarioSet& s, double deg) {
    for (auto& row : s.temp_amb) std::fill(row.begin(), row.end(), deg);
}

double total(const Grid3<double>& g) {
    double a = 0.0;
    for (const auto& w : g)
        for (const auto& i : w) a += std::accumulate(i.begin(), i.end(), 0.0);
    return a;
}

}  // namespace

TEST_CASE("equal split") {
    const auto a = equal_split(9.0, {5.0, 1.0, 5.0});
    CHECK(a[0] == doctest::Approx(3.0));
    CHECK(a[1] == doctest::Approx(1.0));
    CHECK(a[2] == doctest::Approx(3.0));
    CHECK(equal_split(0.0, {1.0, 2.0}) == std::vector<double>{0.0, 0.0});
    CHECK(equal_split(4.0, {}).empty());

    Rng r(17);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> caps(r.uniform_int(1, 8));
        for (auto& c : caps) c = r.uniform(0.0, 7.0);
        const double avail = r.uniform(0.0, 30.0);
        const auto out = equal_split(avail, caps);
        CHECK(std::accumulate(out.begin(), out.end(), 0.0) <= avail + 1e-9);
        for (std::size_t i = 0; i < caps.size(); ++i) CHECK(out[i] <= caps[i] + 1e-12);
    }
}

TEST_CASE("thermostat hysteresis") {
    Thermostat h;
    CHECK(h.power(10.0, true, 2.0, 15.0, 0.5) == 2.0);
    CHECK(h.power(15.2, true, 2.0, 15.0, 0.5) == 2.0);  // inside the band: stays on
    CHECK(h.power(15.6, true, 2.0, 15.0, 0.5) == 0.0);
    CHECK(h.power(15.2, true, 2.0, 15.0, 0.5) == 0.0);  // inside the band: stays off
    CHECK(h.power(10.0, false, 2.0, 15.0, 0.5) == 0.0); // idle vehicles are not heated
}

TEST_CASE("warm day: heated smart charging equals the optimal schedule") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto m = fixture::small_station(2, 16, seed);
        // Fixed charge cap on both sides: the smart plan uses the temperature-free cap.
        for (auto& v : m.fleet) {
            v.temp_arr = 16.0;
            v.beta_chg = 0.0;
        }
        auto s = fixture::small_scenarios(m, 3, seed);
        warm(s, 16.0);
        const auto smart = smart_chg_heat_with_ratio(m, s, 0.0);
        CHECK(total(smart.p_heat) == 0.0);
        SolveLimits lim;
        lim.gap_tol = 1e-9;
        const auto opt = solve_centralized(m, s, lim);
        const double gap = std::abs(smart.expected_cost - opt.expected_cost);
        CHECK(gap <= 1e-6 * std::max(1.0, opt.expected_cost));
    }
}

TEST_CASE("instant charging follows a hand simulation") {
    // Two identical warm vehicles share 4 kW: each gets 2 kW until full.
    StationModel m;
    m.grid = {7.0, 4, 0.5};
    m.tariff.price = {10.0, 10.0, 10.0, 10.0};
    m.pg_max = 4.0;
    VehicleSpec v;
    v.capacity = 10.0;
    v.soc_arr = 0.5;
    v.soc_dep = 0.6;
    v.temp_arr = 20.0;
    v.ta = 0;
    v.td = 4;
    m.fleet = {v, v};
    m.fleet[1].id = "b";
    ScenarioSet s{{1.0}, {{0.0, 0.0, 0.0, 0.0}}, {{20.0, 20.0, 20.0, 20.0}}};
    const auto sch = instant_chg_heat_with_ratio(m, s, 0.2);
    // 0.1 p.u. of 10 kWh needs 1/0.92 kWh at the plug: 2 kW for 0.5 h, then the rest.
    const double rest = 1.0 / 0.92 / 0.5 - 2.0;
    for (int i = 0; i < 2; ++i) {
        CHECK(sch.p_chg[0][i][0] == doctest::Approx(2.0));
        CHECK(sch.p_chg[0][i][1] == doctest::Approx(rest));
        CHECK(sch.p_chg[0][i][2] == 0.0);
        CHECK(sch.soc[0][i][4] == doctest::Approx(0.6));
    }
    CHECK(total(sch.p_heat) == 0.0);
}

TEST_CASE("no heat never heats and leaves cold vehicles short") {
    StationModel m;
    m.tariff = build_tou_tariff(m.grid);
    m.fleet = gen_fleet(2, 1, m.grid);
    for (auto& v : m.fleet) v.temp_arr = -1.0;
    m.pg_max = 7.4;
    const auto base = synthetic_temperature(m.grid, -3.0, 3.2);
    const auto s = gen_scenarios(std::vector<double>(m.grid.n_steps, 0.0), base, 4, 3);
    const auto sch = run_no_heat(m, s);
    CHECK(total(sch.p_heat) == 0.0);
    const auto r = compute_metrics(sch, m, s);
    CHECK(r.overhead_rate == 0.0);
    CHECK(r.unmet_soc > 0.5);
}

TEST_CASE("no heat respects the cold-charging limit on the realized trajectory") {
    const auto m = fixture::small_station(3, 24, 11);
    const auto s = fixture::small_scenarios(m, 3, 4);
    const auto sch = run_no_heat(m, s);
    for (int w = 0; w < s.size(); ++w)
        for (int i = 0; i < m.n(); ++i)
            for (int t = 0; t < m.grid.n_steps; ++t)
                CHECK(sch.p_chg[w][i][t] <= rule_cap(sch.temp[w][i][t], m.thermal, m.fleet[i]) + 1e-9);
}

TEST_CASE("baselines never exceed the grid limit") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto m = fixture::small_station(4, 24, seed);
        m.pg_max = 3.0;  // forces cuts
        const auto s = fixture::small_scenarios(m, 3, seed);
        for (const auto& sch : {run_smart_chg_heat(m, s), run_instant_chg_heat(m, s), run_no_heat(m, s)}) {
            CHECK(sch.grid_ok);
            CHECK(sch.max_grid_excess <= 1e-6);
            CHECK(replay_error(sch, m, s) <= 1e-9);
        }
    }
}

TEST_CASE("ratio grid is validated") {
    const auto m = fixture::small_station(1, 8, 1);
    const auto s = fixture::small_scenarios(m, 2, 1);
    BaselineOptions o;
    o.ratio_grid = {};
    CHECK_THROWS_AS(run_smart_chg_heat(m, s, o), Error);
    o.ratio_grid = {1.5};
    CHECK_THROWS_AS(run_instant_chg_heat(m, s, o), Error);
}
