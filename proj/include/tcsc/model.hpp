#pragma once

// Centralized charging-and-heating MILP, thermal physics, schedules.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcsc/milp.hpp"
#include "tcsc/station.hpp"

namespace tcsc {

// ---- physics -------------------------------------------------------------------

/// One explicit Euler step of the battery heat balance.
double thermal_step(double T, double T_amb, double p_heat, double p_chg, const ThermalParams& th,
                    const VehicleSpec& v, double dt);
/// ph_bar - beta_heat * T, floored at 0.
double heating_cap(double T, const VehicleSpec& v);
/// pc_bar + beta_chg * T, floored at 0.
double charging_cap(double T, const VehicleSpec& v);
/// Charge limit actually allowed at battery temperature T: the charging cap,
/// further reduced to max(0, mu_chg * T) below the setpoint.
double rule_cap(double T, const ThermalParams& th, const VehicleSpec& v);

// ---- schedules -----------------------------------------------------------------

template <class T>
using Grid3 = std::vector<std::vector<std::vector<T>>>;

/// Realized operation of a scheme in every scenario. Power arrays are
/// [scenario][vehicle][step]; state arrays have n_steps + 1 entries per vehicle.
struct Schedule {
    std::string scheme;
    int n_vehicles = 0, n_steps = 0, n_scen = 0;
    Grid3<double> p_chg, p_heat;
    Grid3<double> soc, temp;
    std::vector<std::vector<double>> p_grid, p_pv;  // [scenario][step]
    double expected_cost = 0.0;  // cents, probability weighted
    bool grid_ok = true;          // p_grid <= pg_max everywhere (1e-6)
    double max_grid_excess = 0.0;
    // solver diagnostics
    std::string status = "ok";
    double solver_objective = 0.0;
    double gap = 0.0;
    long nodes = 0;
    double wall_time = 0.0;
};

/// Builds a schedule from per-scenario powers by forward simulation of SoC and
/// temperature; grid draw is the demand not covered by available solar.
Schedule replay(const StationModel& m, const ScenarioSet& s, const Grid3<double>& p_chg,
                const Grid3<double>& p_heat, const std::string& scheme);

/// Same powers in every scenario (powers are [vehicle][step]).
Schedule replay_here_and_now(const StationModel& m, const ScenarioSet& s,
                             const std::vector<std::vector<double>>& p_chg,
                             const std::vector<std::vector<double>>& p_heat, const std::string& scheme);

void write_schedule_json(std::ostream& os, const Schedule& sch, const StationModel& m);
/// Long-format rows: scenario,step,hour,p_chg,p_heat,soc,temp for one vehicle.
void write_vehicle_csv(std::ostream& os, const Schedule& sch, const StationModel& m, int vehicle);

// ---- formulation ---------------------------------------------------------------

enum class Formulation {
    Full,       // one temperature variable per (vehicle, step, scenario)
    Collapsed,  // one reference trajectory per vehicle plus exact scenario offsets
};
enum class RuleForm {
    Reduced,      // one binary per (vehicle, step)
    PerScenario,  // one binary per (vehicle, step, scenario)
};

struct BuildOptions {
    bool soft_departure = true;
    double penalty = 1000.0;  // cents per unit SoC shortfall
    Formulation form = Formulation::Full;
    RuleForm rule = RuleForm::Reduced;
};

/// Row counts per constraint family, keyed by family name.
using RowCounts = std::map<std::string, int>;

struct VariableMap {
    int n_vehicles = 0, n_steps = 0, n_scen = 0;
    Formulation form = Formulation::Full;
    std::vector<std::vector<int>> p_pv, p_grid;  // [t][w]
    std::vector<std::vector<int>> p_chg, p_heat;  // [i][t], -1 outside the window
    std::vector<std::vector<int>> soc;            // [i][t] for t in [ta, td], else -1
    Grid3<int> temp;                              // [i][t][w] (Full) or [i][t][0] (Collapsed)
    Grid3<int> v;                                 // [i][t][0] or [i][t][w]; -1 when absent
    std::vector<int> slack;                       // [i], -1 when hard
    RowCounts rows;
    /// Scenario offsets of the collapsed trajectory: T_itw = T_ref_it + offset[i][t][w].
    Grid3<double> offset;
};

struct BuiltModel {
    milp::MilpProblem problem;
    VariableMap map;
};

/// Linearized thermal coefficients: T' = a*T + b*T_amb + kh*p_heat + kc*p_chg.
struct ThermalCoeffs {
    double a, b, kh, kc;
};
ThermalCoeffs thermal_coeffs(const ThermalParams& th, const VehicleSpec& v, double dt);

/// Big-M values valid for this vehicle under the temperature box.
double big_m_temperature(const StationModel& m);
double big_m_power(const StationModel& m, const VehicleSpec& v);

BuiltModel build_centralized(const StationModel& m, const ScenarioSet& s, const BuildOptions& opt = {});

/// Adds one vehicle's constraints (window, SoC, thermal, caps, cold-charging rule)
/// to `p`, recording indices in `map` slot `i`. Objective terms are left at 0.
void add_vehicle_block(milp::MilpProblem& p, VariableMap& map, const StationModel& m, const ScenarioSet& s, int i,
                       const BuildOptions& opt);
/// Empty map with every index -1, sized for the instance.
VariableMap empty_map(const StationModel& m, const ScenarioSet& s, Formulation form);

struct SolveLimits {
    double time_limit = 60.0;  // seconds for the whole solve
    double gap_tol = 1e-4;
    long node_limit = -1;
};

/// Solves the centralized model (collapsed formulation) and replays the result.
/// Throws Error(Infeasible) with a diagnosis, Error(Timeout) without incumbent.
Schedule solve_centralized(const StationModel& m, const ScenarioSet& s, const SolveLimits& lim,
                           const BuildOptions& opt = {});

/// Powers [i][t] extracted from a MILP solution.
void extract_powers(const VariableMap& map, const std::vector<double>& x, std::vector<std::vector<double>>& p_chg,
                    std::vector<std::vector<double>>& p_heat);

struct EquivalenceReport {
    bool equal = false;
    double reduced_objective = 0.0;
    double per_scenario_objective = 0.0;
    std::string detail;
};

/// Solves the per-scenario-binary and the reduced-binary formulation exactly and compares.
EquivalenceReport check_rule_equivalence(const StationModel& m, const ScenarioSet& s, double tol = 1e-5,
                                         const BuildOptions& opt = {});

/// Largest deviation between a schedule's stored trajectories and a fresh replay of its powers.
double replay_error(const Schedule& sch, const StationModel& m, const ScenarioSet& s);

}  // namespace tcsc
