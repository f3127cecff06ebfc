#pragma once

// Scheme evaluation: unmet SoC, charging cost, heating overhead, solar usage.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tcsc/model.hpp"

namespace tcsc {

enum class CostBasis {
    Battery,  // energy stored: eta_chg * p_chg * dt
    Plug,     // energy drawn for charging: p_chg * dt
};

struct MetricsReport {
    std::string scheme;
    std::string instance;
    double unmet_soc = 0.0;                // p.u., summed over vehicles
    std::optional<double> charging_cost;   // cents/kWh; empty when nothing was stored
    double overhead_rate = 0.0;            // %
    double solar_usage_rate = 0.0;         // %
    double expected_cost = 0.0;            // cents
    double stored_energy = 0.0;            // kWh, on the chosen basis
    double wall_time = 0.0;                // s
};

/// All quantities are probability-weighted averages over scenarios.
MetricsReport compute_metrics(const Schedule& sch, const StationModel& m, const ScenarioSet& s,
                              CostBasis basis = CostBasis::Battery);

/// Per-vehicle departure shortfall, probability weighted.
std::vector<double> unmet_by_vehicle(const Schedule& sch, const StationModel& m, const ScenarioSet& s);

void write_metrics_csv(std::ostream& os, const std::vector<MetricsReport>& rows);
void write_metrics_json(std::ostream& os, const std::vector<MetricsReport>& rows);
std::vector<MetricsReport> read_metrics_json(std::istream& is);

}  // namespace tcsc
