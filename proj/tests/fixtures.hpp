#pragma once

// Small reproducible station instances for tests.

#include <cstdint>

#include "tcsc/model.hpp"

namespace fixture {

/// n vehicles on a short horizon with cold, spread-out scenarios.
inline tcsc::StationModel small_station(int n, int n_steps, std::uint64_t seed) {
    using namespace tcsc;
    StationModel m;
    m.grid.start_hour = 7.0;
    m.grid.n_steps = n_steps;
    m.grid.dt = 0.25;
    m.tariff = build_tou_tariff(m.grid);
    Rng r(seed);
    for (int i = 0; i < n; ++i) {
        VehicleSpec v;
        v.id = "v" + std::to_string(i);
        v.ta = r.uniform_int(0, n_steps / 4);
        v.td = r.uniform_int(n_steps - n_steps / 4, n_steps);
        v.temp_arr = r.uniform(1.0, 5.0);
        v.soc_arr = r.uniform(0.1, 0.3);
        v.soc_dep = r.uniform(0.2, 0.35);
        m.fleet.push_back(v);
    }
    m.pg_max = 5.0 * n;
    return m;
}

inline tcsc::ScenarioSet small_scenarios(const tcsc::StationModel& m, int n_scen, std::uint64_t seed) {
    using namespace tcsc;
    const auto solar = synthetic_solar(m.grid, 2.0 * m.n());
    const auto temp = synthetic_temperature(m.grid, -3.0, 3.2);
    return gen_scenarios(solar, temp, n_scen, seed);
}

}  // namespace fixture
