#include "tcsc/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace tcsc {

std::vector<double> unmet_by_vehicle(const Schedule& sch, const StationModel& m, const ScenarioSet& s) {
    std::vector<double> out(m.n(), 0.0);
    for (int w = 0; w < s.size(); ++w)
        for (int i = 0; i < m.n(); ++i) {
            const auto& v = m.fleet[i];
            out[i] += s.prob[w] * std::max(0.0, v.soc_dep - sch.soc[w][i][v.td]);
        }
    return out;
}

MetricsReport compute_metrics(const Schedule& sch, const StationModel& m, const ScenarioSet& s, CostBasis basis) {
    MetricsReport r;
    r.scheme = sch.scheme;
    r.wall_time = sch.wall_time;
    const double dt = m.grid.dt;
    const double eta = basis == CostBasis::Battery ? m.thermal.eta_chg : 1.0;
    double cost = 0.0, stored = 0.0, heat = 0.0, total = 0.0, pv_used = 0.0, pv_avail = 0.0;
    for (int w = 0; w < s.size(); ++w) {
        const double pi = s.prob[w];
        for (int t = 0; t < m.grid.n_steps; ++t) {
            cost += pi * m.tariff.price[t] * sch.p_grid[w][t] * dt;
            pv_used += pi * sch.p_pv[w][t] * dt;
            pv_avail += pi * s.pv_cap[w][t] * dt;
            for (int i = 0; i < m.n(); ++i) {
                stored += pi * eta * sch.p_chg[w][i][t] * dt;
                heat += pi * sch.p_heat[w][i][t] * dt;
                total += pi * (sch.p_chg[w][i][t] + sch.p_heat[w][i][t]) * dt;
            }
        }
    }
    for (double u : unmet_by_vehicle(sch, m, s)) r.unmet_soc += u;
    r.expected_cost = cost;
    r.stored_energy = stored;
    if (stored > 1e-12) r.charging_cost = cost / stored;
    r.overhead_rate = total > 0.0 ? 100.0 * heat / total : 0.0;
    r.solar_usage_rate = pv_avail > 0.0 ? std::min(100.0, 100.0 * pv_used / pv_avail) : 0.0;
    return r;
}

namespace {

std::string num(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace

void write_metrics_csv(std::ostream& os, const std::vector<MetricsReport>& rows) {
    os << "scheme,instance,unmet_soc,charging_cost,overhead_rate,solar_usage_rate,expected_cost\n";
    for (const auto& r : rows) {
        os << r.scheme << ',' << r.instance << ',' << num(r.unmet_soc) << ','
           << (r.charging_cost ? num(*r.charging_cost) : std::string("NA")) << ',' << num(r.overhead_rate) << ','
           << num(r.solar_usage_rate) << ',' << num(r.expected_cost) << '\n';
    }
}

void write_metrics_json(std::ostream& os, const std::vector<MetricsReport>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["scheme"] = r.scheme;
        j["instance"] = r.instance;
        j["unmet_soc"] = r.unmet_soc;
        j["charging_cost"] = r.charging_cost ? nlohmann::ordered_json(*r.charging_cost) : nlohmann::ordered_json();
        j["overhead_rate"] = r.overhead_rate;
        j["solar_usage_rate"] = r.solar_usage_rate;
        j["expected_cost"] = r.expected_cost;
        j["stored_energy"] = r.stored_energy;
        j["wall_time"] = r.wall_time;
        arr.push_back(std::move(j));
    }
    os << arr.dump(2) << '\n';
}

std::vector<MetricsReport> read_metrics_json(std::istream& is) {
    const auto arr = nlohmann::json::parse(is);
    std::vector<MetricsReport> out;
    for (const auto& j : arr) {
        MetricsReport r;
        r.scheme = j.at("scheme").get<std::string>();
        r.instance = j.value("instance", std::string());
        r.unmet_soc = j.at("unmet_soc").get<double>();
        if (!j.at("charging_cost").is_null()) r.charging_cost = j.at("charging_cost").get<double>();
        r.overhead_rate = j.at("overhead_rate").get<double>();
        r.solar_usage_rate = j.at("solar_usage_rate").get<double>();
        r.expected_cost = j.value("expected_cost", 0.0);
        r.stored_energy = j.value("stored_energy", 0.0);
        r.wall_time = j.value("wall_time", 0.0);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace tcsc
