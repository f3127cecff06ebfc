#pragma once

// Decentralized scheduling: vehicle subproblems coordinated by a per-step
// price on station excess, followed by rescheduling of balancing vehicles.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tcsc/model.hpp"

namespace tcsc {

struct VehiclePlan {
    int vehicle = -1;
    std::vector<double> p_chg, p_heat;  // [t]
    double objective = 0.0;             // subproblem objective, cents
    double slack = 0.0;                 // departure shortfall, p.u.
};

struct DualState {
    std::vector<double> alpha;  // cents/kWh per step, >= 0
    std::vector<double> delta;  // kW excess per step
    int iteration = 0;
    double step_size = 0.0;
};

/// Solar that can be counted on at each step: min(min over scenarios of the cap, demand).
std::vector<double> hat_ppv(const std::vector<VehiclePlan>& plans, const ScenarioSet& s, int n_steps);
/// Station demand minus counted solar minus the grid limit.
std::vector<double> compute_excess(const std::vector<VehiclePlan>& plans, const std::vector<double>& hat,
                                   double pg_max);
/// alpha <- max(0, alpha + s * delta), elementwise.
void dual_update(DualState& st);

struct FlexEntry {
    int vehicle;
    double fl;
};
/// Excess-weighted demand per vehicle, descending; ties go to the lower index.
std::vector<FlexEntry> flexibility_rank(const std::vector<VehiclePlan>& plans, const std::vector<double>& delta);

/// Greedy choice of balancing vehicles: repeatedly takes the highest flexibility
/// index and removes its demand from the excess until no step is congested.
std::vector<int> select_balancing(const std::vector<VehiclePlan>& plans, std::vector<double> delta);

/// Station cost of the powers when only the guaranteed solar is credited (cents).
double proxy_objective(const StationModel& m, const std::vector<VehiclePlan>& plans, const std::vector<double>& hat);
/// Expected grid cost of the powers over all scenarios (cents).
double expected_objective(const StationModel& m, const ScenarioSet& s, const std::vector<VehiclePlan>& plans);

/// One vehicle's scheduling problem, kept warm across price updates.
class VehicleSubproblem {
public:
    VehicleSubproblem(const StationModel& m, const ScenarioSet& s, int vehicle, const BuildOptions& opt = {});
    ~VehicleSubproblem();
    VehicleSubproblem(VehicleSubproblem&&) noexcept;
    VehicleSubproblem& operator=(VehicleSubproblem&&) noexcept;

    /// Minimizes sum_t (price_t + alpha_t) * (p_chg + p_heat) * dt plus the departure penalty.
    VehiclePlan solve(const std::vector<double>& alpha, double time_limit = lp::kInf);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

VehiclePlan solve_vehicle_sub(const StationModel& m, const ScenarioSet& s, int vehicle,
                              const std::vector<double>& alpha, const BuildOptions& opt = {});

/// Jointly reschedules `selected` at tariff cost while the other vehicles keep
/// their plans; station demand must stay within pg_max plus guaranteed solar.
std::vector<VehiclePlan> reschedule(const StationModel& m, const ScenarioSet& s, const std::vector<int>& selected,
                                    const std::vector<VehiclePlan>& plans, double time_limit = lp::kInf,
                                    const BuildOptions& opt = {});

struct DecentralOptions {
    std::vector<double> step_sizes{0.01, 0.05, 0.1, 0.5};  // cents/kWh per kW of excess
    int n_iter = 50;
    double dual_seconds_per_vehicle = 10.0;        // budget of the price phase
    double reschedule_seconds_per_vehicle = 5.0;   // budget of the rescheduling phase
    BuildOptions build;
};

struct TraceRow {
    int iteration;
    double step_size;
    double max_delta;
    double alpha_sum;
    double alpha_min;  // smallest multiplier used by this iterate
    double proxy;     // cents
    double expected;  // cents
};

struct DecentralResult {
    Schedule schedule;
    std::vector<TraceRow> trace;
    std::vector<VehiclePlan> dual_plans;  // plans kept from the price phase
    std::vector<double> alpha;            // multipliers of the kept iterate
    double step_size = 0.0;               // step size of the kept iterate
    bool converged = false;               // price phase alone removed all excess
    std::vector<int> selected;            // balancing vehicles, in selection order
    bool budget_exhausted = false;
};

DecentralResult run_decentralized(const StationModel& m, const ScenarioSet& s, const DecentralOptions& opt = {});

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);

}  // namespace tcsc
