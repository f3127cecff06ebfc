#pragma once

// Experiment configuration and the compare / sweep / scale / dump-lp drivers.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tcsc/baselines.hpp"
#include "tcsc/decentral.hpp"
#include "tcsc/metrics.hpp"
#include "tcsc/model.hpp"

namespace tcsc {

/// Everything needed to build one instance. Random parts (fleet, scenario
/// noise) are drawn from `seed`: the fleet uses `seed`, scenarios `seed + 1`.
struct Config {
    std::string name = "instance";
    std::uint64_t seed = 1;
    TimeGrid grid;
    std::optional<std::filesystem::path> tariff_csv;  // time-of-use schedule when empty
    ThermalParams thermal;

    int n_vehicles = 2;
    FleetOptions fleet_options;
    std::vector<VehicleSpec> vehicles;  // explicit fleet; overrides generation when non-empty

    std::optional<double> pg_max;  // kW; else pg_fraction of connected capacity
    double pg_fraction = 0.5;
    double big_M_T = 60.0, big_M_P = 10.0;

    std::vector<std::filesystem::path> solar_csv;  // averaged when several; synthetic when empty
    double sunrise = 6.75, sunset = 16.25;
    double solar_fraction = 0.4;  // peak as a share of connected capacity
    bool solar_scale_up = true;

    std::optional<std::filesystem::path> temperature_csv;
    double temp_min = -3.0, temp_max = 3.2;  // synthetic diurnal curve
    double temp_shift = 0.0;                 // added to every scenario's ambient

    int n_scenarios = 10;
    ScenarioOptions scenario_options;

    double time_limit_per_vehicle = 60.0;  // central solver, seconds
    double gap_tol = 1e-3;
    BuildOptions build;
    DecentralOptions decentral;
    BaselineOptions baselines;
    CostBasis cost_basis = CostBasis::Battery;
};

Config parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);
/// A complete, commented-free config with every field at its default.
std::string default_config_json(int n_vehicles = 2, int n_scenarios = 10, std::uint64_t seed = 1);

struct Instance {
    StationModel model;
    ScenarioSet scenarios;
};
Instance build_instance(const Config& c);

inline const std::vector<std::string>& scheme_names() {
    static const std::vector<std::string> names{"tcsc-central", "tcsc-decent", "smart-chg-heat", "instant-chg-heat",
                                                "no-heat"};
    return names;
}
/// Comma-separated list; "all" expands to every scheme. Throws Error(Usage) on unknown names.
std::vector<std::string> parse_schemes(const std::string& list);

/// `trace` receives the price-phase iterates of tcsc-decent.
Schedule run_scheme(const Config& c, const Instance& inst, const std::string& scheme,
                    std::vector<TraceRow>* trace = nullptr);

struct CompareResult {
    std::vector<MetricsReport> rows;
    std::vector<Schedule> schedules;
    std::vector<TraceRow> dual_trace;
};
/// Runs each scheme on the same instance. With `out_dir`, writes metrics.csv,
/// metrics.json, one schedule JSON per scheme, per-vehicle trajectory CSVs and,
/// for tcsc-decent, the price-phase trace (dual_trace.csv).
CompareResult cmd_compare(const Config& c, const std::vector<std::string>& schemes,
                          const std::optional<std::filesystem::path>& out_dir = {});

struct SweepRow {
    std::string scheme;
    double shift;
    MetricsReport metrics;
};
struct SweepSlope {
    std::string scheme;
    double cost_slope;      // cents/kWh per degC
    double overhead_slope;  // % per degC
};
struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepSlope> slopes;
};
/// Least-squares slope of y on x; 0 when x has no spread.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);
SweepResult cmd_sweep(const Config& c, const std::vector<double>& shifts, const std::vector<std::string>& schemes,
                      const std::optional<std::filesystem::path>& out_dir = {});

struct ScaleRow {
    std::string scheme;
    int vehicles = 0, scenarios = 0;
    std::string status;
    double wall_time = 0.0;
    double objective = 0.0;
    double gap = 0.0;  // solver gap (central) or NaN
};
std::vector<ScaleRow> cmd_scale(const Config& c, const std::vector<int>& sizes, const std::vector<int>& scen_counts,
                                const std::optional<std::filesystem::path>& out_dir = {});

/// Writes the centralized model (collapsed unless `full`) in LP text format.
void dump_lp(const Config& c, std::ostream& os, bool full = false);

void write_sweep_csv(std::ostream& os, const SweepResult& r);
void write_slopes_csv(std::ostream& os, const SweepResult& r);
void write_scale_csv(std::ostream& os, const std::vector<ScaleRow>& rows);

}  // namespace tcsc
