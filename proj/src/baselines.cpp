#include "tcsc/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

namespace tcsc {

using lp::Relation;
using lp::Term;

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kEps = 1e-9;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Charge that brings SoC exactly to `target` within one step.
double charge_to(double soc, double target, const VehicleSpec& v, double eta, double dt) {
    return std::max(0.0, (target - soc) * v.capacity / (eta * dt));
}

// Scales every vehicle's power at a step so the station stays within grid + solar.
void cut_excess(std::vector<double>& pc, std::vector<double>& ph, double limit) {
    double demand = 0.0;
    for (std::size_t i = 0; i < pc.size(); ++i) demand += pc[i] + ph[i];
    if (demand <= limit) return;
    const double f = limit > 0.0 ? limit / demand : 0.0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        pc[i] *= f;
        ph[i] *= f;
    }
}

// Per-step requested charge for vehicle i given its current realized state.
using Request = std::function<void(int t, const std::vector<double>& soc, const std::vector<double>& temp,
                                   std::vector<double>& want)>;

// Realized operation in one scenario: thermostat heating (heated schemes) or the
// cold-charging limit enforced by the pack (unheated), proportional excess cut,
// then state update.
void simulate_scenario(const StationModel& m, const ScenarioSet& s, int w, double ratio, double deadband,
                       const Request& request, const std::vector<std::vector<double>>* plan, bool heat,
                       Grid3<double>& pc_out, Grid3<double>& ph_out) {
    const int n = m.n(), T = m.grid.n_steps;
    const double dt = m.grid.dt;
    const auto& th = m.thermal;
    std::vector<double> soc(n), temp(n), want(n), pc(n), ph(n);
    std::vector<Thermostat> heaters(n);
    for (int i = 0; i < n; ++i) {
        soc[i] = m.fleet[i].soc_arr;
        temp[i] = m.fleet[i].temp_arr;
    }
    for (int t = 0; t < T; ++t) {
        std::fill(want.begin(), want.end(), 0.0);
        request(t, soc, temp, want);
        for (int i = 0; i < n; ++i) {
            const auto& v = m.fleet[i];
            pc[i] = ph[i] = 0.0;
            if (!v.parked(t)) continue;
            const double room = charge_to(soc[i], 1.0, v, th.eta_chg, dt);
            pc[i] = std::clamp(heat ? want[i] : std::min(want[i], rule_cap(temp[i], th, v)), 0.0, room);
            if (heat) {
                const bool next = plan ? (t + 1 < v.td && (*plan)[i][t + 1] > kEps) : (t + 1 < v.td && want[i] > kEps);
                const double cap = std::min(ratio * v.p_max, heating_cap(temp[i], v));
                ph[i] = heaters[i].power(temp[i], next || pc[i] > kEps, cap, th.T_set, deadband);
            }
        }
        cut_excess(pc, ph, m.pg_max + s.pv_cap[w][t]);
        for (int i = 0; i < n; ++i) {
            const auto& v = m.fleet[i];
            pc_out[w][i][t] = pc[i];
            ph_out[w][i][t] = ph[i];
            if (!v.parked(t)) continue;
            soc[i] += th.eta_chg * pc[i] * dt / v.capacity;
            temp[i] = thermal_step(temp[i], s.temp_amb[w][t], ph[i], pc[i], th, v, dt);
        }
    }
}

Grid3<double> zeros(const StationModel& m, const ScenarioSet& s) {
    return Grid3<double>(s.size(), std::vector<std::vector<double>>(m.n(), std::vector<double>(m.grid.n_steps, 0.0)));
}

template <class Run>
Schedule best_ratio(const StationModel& m, const ScenarioSet& s, const BaselineOptions& opt, Run run) {
    if (opt.ratio_grid.empty()) throw Error(ErrorCode::Invalid, "ratio grid is empty");
    const auto t0 = Clock::now();
    Schedule best;
    double best_cost = lp::kInf;
    bool have = false;
    for (double r : opt.ratio_grid) {
        if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorCode::Invalid, "heating ratio must lie in [0, 1)");
        Schedule sch = run(r);
        const auto rep = compute_metrics(sch, m, s, opt.cost_basis);
        const double c = rep.charging_cost.value_or(lp::kInf);
        if (!have || c < best_cost - 1e-12) {
            best = std::move(sch);
            best_cost = c;
            have = true;
        }
    }
    best.wall_time = seconds_since(t0);
    return best;
}

}  // namespace

double Thermostat::power(double T, bool charging, double cap, double T_set, double deadband) {
    if (T < T_set) on = true;
    else if (T >= T_set + deadband) on = false;
    return charging && on ? std::max(0.0, cap) : 0.0;
}

std::vector<double> equal_split(double available, const std::vector<double>& caps) {
    std::vector<double> out(caps.size(), 0.0);
    if (caps.empty() || available <= 0.0) return out;
    const double share = available / static_cast<double>(caps.size());
    for (std::size_t i = 0; i < caps.size(); ++i) out[i] = std::clamp(caps[i], 0.0, share);
    return out;
}

std::vector<std::vector<double>> smart_charging_plan(const StationModel& m, const ScenarioSet& s,
                                                     const std::vector<std::vector<double>>& cap, double penalty) {
    const int n = m.n(), T = m.grid.n_steps, W = s.size();
    const double dt = m.grid.dt;
    lp::LpProblem p;
    std::vector<std::vector<int>> pc(n, std::vector<int>(T, -1));
    std::vector<std::vector<int>> soc(n, std::vector<int>(T + 1, -1));
    std::vector<std::vector<int>> grid(T, std::vector<int>(W)), pv(T, std::vector<int>(W));
    for (int t = 0; t < T; ++t)
        for (int w = 0; w < W; ++w) {
            pv[t][w] = p.add_var(0.0, s.pv_cap[w][t]);
            grid[t][w] = p.add_var(0.0, m.pg_max, s.prob[w] * m.tariff.price[t] * dt);
        }
    for (int i = 0; i < n; ++i) {
        const auto& v = m.fleet[i];
        for (int t = v.ta; t < v.td; ++t) pc[i][t] = p.add_var(0.0, std::max(0.0, cap[i][t]));
        for (int t = v.ta; t <= v.td; ++t)
            soc[i][t] = p.add_var(t == v.ta ? v.soc_arr : 0.0, t == v.ta ? v.soc_arr : 1.0);
        const int slack = p.add_var(0.0, v.soc_dep, penalty);
        for (int t = v.ta; t < v.td; ++t)
            p.add_constraint({{soc[i][t + 1], 1.0}, {soc[i][t], -1.0}, {pc[i][t], -m.thermal.eta_chg * dt / v.capacity}},
                             Relation::Equal, 0.0);
        p.add_constraint({{soc[i][v.td], 1.0}, {slack, 1.0}}, Relation::GreaterEqual, v.soc_dep);
    }
    for (int t = 0; t < T; ++t)
        for (int w = 0; w < W; ++w) {
            std::vector<Term> row{{pv[t][w], 1.0}, {grid[t][w], 1.0}};
            for (int i = 0; i < n; ++i)
                if (pc[i][t] >= 0) row.push_back({pc[i][t], -1.0});
            p.add_constraint(std::move(row), Relation::Equal, 0.0);
        }
    const auto r = lp::solve_lp(p);
    if (r.status != lp::LpStatus::Optimal)
        throw Error(ErrorCode::Internal, std::string("smart charging plan: LP ") + lp::to_string(r.status));
    std::vector<std::vector<double>> out(n, std::vector<double>(T, 0.0));
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < T; ++t)
            if (pc[i][t] >= 0) out[i][t] = std::max(0.0, r.x[pc[i][t]]);
    return out;
}

Schedule smart_chg_heat_with_ratio(const StationModel& m, const ScenarioSet& s, double ratio,
                                   const BaselineOptions& opt) {
    m.validate();
    s.validate(m.grid.n_steps);
    const int n = m.n(), T = m.grid.n_steps;
    std::vector<std::vector<double>> cap(n, std::vector<double>(T, 0.0));
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < T; ++t) cap[i][t] = std::min((1.0 - ratio) * m.fleet[i].p_max, m.fleet[i].pc_bar);
    const auto plan = smart_charging_plan(m, s, cap, opt.penalty);
    auto pc = zeros(m, s), ph = zeros(m, s);
    const Request follow = [&](int t, const std::vector<double>&, const std::vector<double>&, std::vector<double>& want) {
        for (int i = 0; i < n; ++i) want[i] = plan[i][t];
    };
    for (int w = 0; w < s.size(); ++w) simulate_scenario(m, s, w, ratio, opt.deadband, follow, &plan, true, pc, ph);
    return replay(m, s, pc, ph, "smart-chg-heat");
}

Schedule instant_chg_heat_with_ratio(const StationModel& m, const ScenarioSet& s, double ratio,
                                     const BaselineOptions& opt) {
    m.validate();
    s.validate(m.grid.n_steps);
    const int n = m.n();
    const double dt = m.grid.dt;
    auto pc = zeros(m, s), ph = zeros(m, s);
    const Request first_come = [&](int t, const std::vector<double>& soc, const std::vector<double>&,
                                   std::vector<double>& want) {
        std::vector<int> who;
        std::vector<double> caps;
        for (int i = 0; i < n; ++i) {
            const auto& v = m.fleet[i];
            if (!v.parked(t) || soc[i] >= v.soc_dep - kEps) continue;
            who.push_back(i);
            caps.push_back(std::min({(1.0 - ratio) * v.p_max, v.pc_bar,
                                     charge_to(soc[i], v.soc_dep, v, m.thermal.eta_chg, dt)}));
        }
        const auto alloc = equal_split(m.pg_max + s.min_pv(t), caps);
        for (std::size_t k = 0; k < who.size(); ++k) want[who[k]] = alloc[k];
    };
    for (int w = 0; w < s.size(); ++w) simulate_scenario(m, s, w, ratio, opt.deadband, first_come, nullptr, true, pc, ph);
    return replay(m, s, pc, ph, "instant-chg-heat");
}

Schedule run_smart_chg_heat(const StationModel& m, const ScenarioSet& s, const BaselineOptions& opt) {
    return best_ratio(m, s, opt, [&](double r) { return smart_chg_heat_with_ratio(m, s, r, opt); });
}

Schedule run_instant_chg_heat(const StationModel& m, const ScenarioSet& s, const BaselineOptions& opt) {
    return best_ratio(m, s, opt, [&](double r) { return instant_chg_heat_with_ratio(m, s, r, opt); });
}

Schedule run_no_heat(const StationModel& m, const ScenarioSet& s, const BaselineOptions& opt) {
    m.validate();
    s.validate(m.grid.n_steps);
    const auto t0 = Clock::now();
    const int n = m.n(), T = m.grid.n_steps, W = s.size();
    const auto& th = m.thermal;
    std::vector<std::vector<double>> plan(n, std::vector<double>(T, 0.0));
    const std::vector<std::vector<double>> no_heat(n, std::vector<double>(T, 0.0));
    // Unheated temperature depends on the plan's own waste heat: iterate.
    for (int round = 0; round < std::max(1, opt.no_heat_rounds); ++round) {
        const Schedule sim = replay_here_and_now(m, s, plan, no_heat, "no-heat");
        std::vector<std::vector<double>> cap(n, std::vector<double>(T, 0.0));
        for (int i = 0; i < n; ++i) {
            const auto& v = m.fleet[i];
            for (int t = v.ta; t < v.td; ++t) {
                double c = v.p_max;
                for (int w = 0; w < W; ++w) c = std::min(c, rule_cap(sim.temp[w][i][t], th, v));
                cap[i][t] = std::min(c, v.pc_bar);
            }
        }
        plan = smart_charging_plan(m, s, cap, opt.penalty);
    }
    // The pack enforces the limits on the realized trajectory.
    auto pc = zeros(m, s), ph = zeros(m, s);
    const Request follow = [&](int t, const std::vector<double>&, const std::vector<double>&, std::vector<double>& want) {
        for (int i = 0; i < n; ++i) want[i] = plan[i][t];
    };
    for (int w = 0; w < W; ++w) simulate_scenario(m, s, w, 0.0, opt.deadband, follow, &plan, false, pc, ph);
    Schedule sch = replay(m, s, pc, ph, "no-heat");
    sch.wall_time = seconds_since(t0);
    return sch;
}

}  // namespace tcsc
