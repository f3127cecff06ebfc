#pragma once

// Reference schemes: smart charging with a thermostat, first-come instant
// charging with a thermostat, and smart charging without heating.

#include <vector>

#include "tcsc/metrics.hpp"
#include "tcsc/model.hpp"

namespace tcsc {

struct BaselineOptions {
    std::vector<double> ratio_grid{0.15, 0.20, 0.25, 0.30};  // share of p_max reserved for heating
    double deadband = 0.5;    // degC above the setpoint the thermostat aims for
    double penalty = 1000.0;  // cents per unit SoC shortfall in the planning LP
    int no_heat_rounds = 3;   // simulate -> cap -> re-solve rounds
    CostBasis cost_basis = CostBasis::Battery;
};

Schedule run_smart_chg_heat(const StationModel& m, const ScenarioSet& s, const BaselineOptions& opt = {});
Schedule run_instant_chg_heat(const StationModel& m, const ScenarioSet& s, const BaselineOptions& opt = {});
Schedule run_no_heat(const StationModel& m, const ScenarioSet& s, const BaselineOptions& opt = {});

/// Single-ratio variants used by the grid search.
Schedule smart_chg_heat_with_ratio(const StationModel& m, const ScenarioSet& s, double ratio,
                                   const BaselineOptions& opt = {});
Schedule instant_chg_heat_with_ratio(const StationModel& m, const ScenarioSet& s, double ratio,
                                     const BaselineOptions& opt = {});

/// Smart-charging plan [i][t]: cost-minimal charging under per-vehicle caps
/// (cap[i][t], kW) with scenario grid recourse; no thermal model.
std::vector<std::vector<double>> smart_charging_plan(const StationModel& m, const ScenarioSet& s,
                                                     const std::vector<std::vector<double>>& cap, double penalty);

/// Equal split of `available` among requesters, each limited by its own cap.
std::vector<double> equal_split(double available, const std::vector<double>& caps);

/// On-board bang-bang heater: switches on below the setpoint, off at setpoint +
/// deadband, keeps its state inside the band, and runs only while the vehicle is
/// charging now or in the next step. Heating power when on is `cap`.
struct Thermostat {
    bool on = false;
    double power(double T, bool charging, double cap, double T_set, double deadband);
};

}  // namespace tcsc
