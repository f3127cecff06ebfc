#include "tcsc/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace tcsc {

using lp::kInf;
using lp::Relation;
using lp::Term;

// ---- physics -------------------------------------------------------------------

double thermal_step(double T, double T_amb, double p_heat, double p_chg, const ThermalParams& th,
                    const VehicleSpec& v, double dt) {
    const double mc = v.mass * th.heat_capacity;
    const double flow = -th.mu_heat * th.loss_hA * (T - T_amb) + th.eta_heat * p_heat + (1.0 - th.eta_chg) * p_chg;
    return T + dt * flow / mc;
}

double heating_cap(double T, const VehicleSpec& v) { return std::max(0.0, v.ph_bar - v.beta_heat * T); }

double charging_cap(double T, const VehicleSpec& v) { return std::max(0.0, v.pc_bar + v.beta_chg * T); }

double rule_cap(double T, const ThermalParams& th, const VehicleSpec& v) {
    const double cap = charging_cap(T, v);
    if (T < th.T_set) return std::min(cap, std::max(0.0, th.mu_chg * T));
    return cap;
}

ThermalCoeffs thermal_coeffs(const ThermalParams& th, const VehicleSpec& v, double dt) {
    const double mc = v.mass * th.heat_capacity;
    const double loss = dt * th.mu_heat * th.loss_hA / mc;
    return {1.0 - loss, loss, dt * th.eta_heat / mc, dt * (1.0 - th.eta_chg) / mc};
}

double big_m_temperature(const StationModel& m) {
    return std::min(m.big_M_T, m.thermal.T_set - m.thermal.T_lo);
}

double big_m_power(const StationModel& m, const VehicleSpec& v) {
    // With v = 0 the battery is at or above the setpoint, so the rule row only
    // has to admit max over T >= T_set of min(p_max, charging cap) - mu_chg * T.
    // That piecewise-linear function peaks at one of its breakpoints.
    const auto& th = m.thermal;
    std::vector<double> pts{th.T_set, th.T_hi};
    if (v.beta_chg > 0.0) {
        const double kink = (v.p_max - v.pc_bar) / v.beta_chg;
        if (kink > th.T_set && kink < th.T_hi) pts.push_back(kink);
    }
    double need = 0.0;
    for (double T : pts) need = std::max(need, std::min(v.p_max, charging_cap(T, v)) - th.mu_chg * T);
    return std::min(m.big_M_P, std::max(need, 1e-3));
}

// ---- schedules -----------------------------------------------------------------

Schedule replay(const StationModel& m, const ScenarioSet& s, const Grid3<double>& p_chg, const Grid3<double>& p_heat,
                const std::string& scheme) {
    const int n = m.n(), T = m.grid.n_steps, W = s.size();
    const double dt = m.grid.dt;
    Schedule sch;
    sch.scheme = scheme;
    sch.n_vehicles = n;
    sch.n_steps = T;
    sch.n_scen = W;
    sch.p_chg = p_chg;
    sch.p_heat = p_heat;
    sch.soc.assign(W, std::vector<std::vector<double>>(n, std::vector<double>(T + 1, 0.0)));
    sch.temp = sch.soc;
    sch.p_grid.assign(W, std::vector<double>(T, 0.0));
    sch.p_pv = sch.p_grid;
    for (int w = 0; w < W; ++w) {
        for (int i = 0; i < n; ++i) {
            const auto& v = m.fleet[i];
            auto& soc = sch.soc[w][i];
            auto& temp = sch.temp[w][i];
            for (int t = 0; t <= v.ta; ++t) {
                soc[t] = v.soc_arr;
                temp[t] = v.temp_arr;
            }
            for (int t = v.ta; t < v.td; ++t) {
                soc[t + 1] = soc[t] + m.thermal.eta_chg * p_chg[w][i][t] * dt / v.capacity;
                temp[t + 1] =
                    thermal_step(temp[t], s.temp_amb[w][t], p_heat[w][i][t], p_chg[w][i][t], m.thermal, v, dt);
            }
            for (int t = v.td + 1; t <= T; ++t) {
                soc[t] = soc[v.td];
                temp[t] = temp[v.td];
            }
        }
        for (int t = 0; t < T; ++t) {
            double demand = 0.0;
            for (int i = 0; i < n; ++i) demand += p_chg[w][i][t] + p_heat[w][i][t];
            const double grid = std::max(0.0, demand - s.pv_cap[w][t]);
            sch.p_grid[w][t] = grid;
            sch.p_pv[w][t] = demand - grid;
            sch.expected_cost += s.prob[w] * m.tariff.price[t] * grid * dt;
            const double excess = grid - m.pg_max;
            sch.max_grid_excess = std::max(sch.max_grid_excess, excess);
        }
    }
    sch.grid_ok = sch.max_grid_excess <= 1e-6;
    return sch;
}

Schedule replay_here_and_now(const StationModel& m, const ScenarioSet& s,
                             const std::vector<std::vector<double>>& p_chg,
                             const std::vector<std::vector<double>>& p_heat, const std::string& scheme) {
    const Grid3<double> c(s.size(), p_chg), h(s.size(), p_heat);
    return replay(m, s, c, h, scheme);
}

double replay_error(const Schedule& sch, const StationModel& m, const ScenarioSet& s) {
    const Schedule fresh = replay(m, s, sch.p_chg, sch.p_heat, sch.scheme);
    double err = 0.0;
    for (int w = 0; w < sch.n_scen; ++w)
        for (int i = 0; i < sch.n_vehicles; ++i)
            for (int t = 0; t <= sch.n_steps; ++t) {
                err = std::max(err, std::abs(fresh.soc[w][i][t] - sch.soc[w][i][t]));
                err = std::max(err, std::abs(fresh.temp[w][i][t] - sch.temp[w][i][t]));
            }
    return err;
}

void write_schedule_json(std::ostream& os, const Schedule& sch, const StationModel& m) {
    nlohmann::ordered_json j;
    j["scheme"] = sch.scheme;
    j["status"] = sch.status;
    j["n_vehicles"] = sch.n_vehicles;
    j["n_steps"] = sch.n_steps;
    j["n_scenarios"] = sch.n_scen;
    j["dt_hours"] = m.grid.dt;
    j["start_hour"] = m.grid.start_hour;
    j["expected_cost_cents"] = sch.expected_cost;
    j["grid_ok"] = sch.grid_ok;
    j["solver"] = {{"objective", sch.solver_objective}, {"gap", sch.gap}, {"nodes", sch.nodes}};
    nlohmann::ordered_json vehicles = nlohmann::ordered_json::array();
    for (int i = 0; i < sch.n_vehicles; ++i) {
        nlohmann::ordered_json v;
        v["id"] = m.fleet[i].id;
        v["p_chg"] = nlohmann::ordered_json::array();
        v["p_heat"] = nlohmann::ordered_json::array();
        v["soc"] = nlohmann::ordered_json::array();
        v["temp"] = nlohmann::ordered_json::array();
        for (int w = 0; w < sch.n_scen; ++w) {
            v["p_chg"].push_back(sch.p_chg[w][i]);
            v["p_heat"].push_back(sch.p_heat[w][i]);
            v["soc"].push_back(sch.soc[w][i]);
            v["temp"].push_back(sch.temp[w][i]);
        }
        vehicles.push_back(std::move(v));
    }
    j["vehicles"] = std::move(vehicles);
    j["p_grid"] = sch.p_grid;
    j["p_pv"] = sch.p_pv;
    os << j.dump(1) << '\n';
}

void write_vehicle_csv(std::ostream& os, const Schedule& sch, const StationModel& m, int i) {
    os << "scenario,step,hour,p_chg,p_heat,soc,temp\n";
    os << std::setprecision(10);
    for (int w = 0; w < sch.n_scen; ++w)
        for (int t = 0; t <= sch.n_steps; ++t) {
            const double pc = t < sch.n_steps ? sch.p_chg[w][i][t] : 0.0;
            const double ph = t < sch.n_steps ? sch.p_heat[w][i][t] : 0.0;
            os << w << ',' << t << ',' << m.grid.hour_of(t) << ',' << pc << ',' << ph << ',' << sch.soc[w][i][t]
               << ',' << sch.temp[w][i][t] << '\n';
        }
}

// ---- formulation ---------------------------------------------------------------

VariableMap empty_map(const StationModel& m, const ScenarioSet& s, Formulation form) {
    const int n = m.n(), T = m.grid.n_steps, W = s.size();
    VariableMap map;
    map.n_vehicles = n;
    map.n_steps = T;
    map.n_scen = W;
    map.form = form;
    map.p_pv.assign(T, std::vector<int>(W, -1));
    map.p_grid = map.p_pv;
    map.p_chg.assign(n, std::vector<int>(T, -1));
    map.p_heat = map.p_chg;
    map.soc.assign(n, std::vector<int>(T + 1, -1));
    const int tw = form == Formulation::Full ? W : 1;
    map.temp.assign(n, std::vector<std::vector<int>>(T + 1, std::vector<int>(tw, -1)));
    map.v.assign(n, std::vector<std::vector<int>>(T + 1, std::vector<int>()));
    map.slack.assign(n, -1);
    map.offset.assign(n, std::vector<std::vector<double>>(T + 1, std::vector<double>(W, 0.0)));
    return map;
}

namespace {

std::string idx(const std::string& base, std::initializer_list<int> ids) {
    std::string s = base + "[";
    bool first = true;
    for (int k : ids) {
        if (!first) s += ",";
        s += std::to_string(k);
        first = false;
    }
    return s + "]";
}

}  // namespace

void add_vehicle_block(milp::MilpProblem& p, VariableMap& map, const StationModel& m, const ScenarioSet& s, int i,
                       const BuildOptions& opt) {
    const auto& v = m.fleet[i];
    const auto& th = m.thermal;
    const int W = s.size();
    const double dt = m.grid.dt;
    const double mc = v.mass * th.heat_capacity;
    const double loss = th.mu_heat * th.loss_hA;
    const double M_T = big_m_temperature(m);
    const double M_P = big_m_power(m, v);
    const bool collapsed = map.form == Formulation::Collapsed;
    auto& lp = p.lp;
    auto& rows = map.rows;

    // Scenario offsets of the temperature relative to the probability-weighted ambient.
    std::vector<double> amb_ref(m.grid.n_steps, 0.0);
    for (int t = 0; t < m.grid.n_steps; ++t)
        for (int w = 0; w < W; ++w) amb_ref[t] += s.prob[w] * s.temp_amb[w][t];
    const ThermalCoeffs k = thermal_coeffs(th, v, dt);
    auto& off = map.offset[i];
    for (int t = v.ta; t < v.td; ++t)
        for (int w = 0; w < W; ++w) off[t + 1][w] = k.a * off[t][w] + k.b * (s.temp_amb[w][t] - amb_ref[t]);

    // Arrival-step limits use the known arrival temperature.
    double chg_arr = std::min(v.p_max, charging_cap(v.temp_arr, v));
    if (v.temp_arr < th.T_set) chg_arr = std::min(chg_arr, std::max(0.0, th.mu_chg * v.temp_arr));
    const double heat_arr = std::min(v.p_max, heating_cap(v.temp_arr, v));

    for (int t = v.ta; t < v.td; ++t) {
        const bool arr = t == v.ta;
        map.p_chg[i][t] = lp.add_var(0.0, arr ? chg_arr : v.p_max, 0.0, idx("p_chg", {i, t}));
        map.p_heat[i][t] = lp.add_var(0.0, arr ? heat_arr : v.p_max, 0.0, idx("p_heat", {i, t}));
    }
    for (int t = v.ta; t <= v.td; ++t) {
        const bool arr = t == v.ta;
        map.soc[i][t] = lp.add_var(arr ? v.soc_arr : 0.0, arr ? v.soc_arr : 1.0, 0.0, idx("soc", {i, t}));
    }
    for (int t = v.ta; t <= v.td; ++t) {
        const bool arr = t == v.ta;
        if (collapsed) {
            double lo = th.T_lo, hi = th.T_hi;
            if (!arr) {
                const auto [mn, mx] = std::minmax_element(off[t].begin(), off[t].end());
                lo = th.T_lo - *mn;
                hi = th.T_hi - *mx;
                if (lo > hi)
                    throw Error(ErrorCode::Infeasible, "temperature range cannot hold in every scenario for vehicle '" +
                                                           v.id + "'");
            }
            map.temp[i][t][0] = lp.add_var(arr ? v.temp_arr : lo, arr ? v.temp_arr : hi, 0.0, idx("T", {i, t}));
        } else {
            for (int w = 0; w < W; ++w)
                map.temp[i][t][w] =
                    lp.add_var(arr ? v.temp_arr : th.T_lo, arr ? v.temp_arr : th.T_hi, 0.0, idx("T", {i, t, w}));
        }
    }
    for (int t = v.ta + 1; t < v.td; ++t) {
        if (opt.rule == RuleForm::Reduced) {
            const int b = lp.add_var(0.0, 1.0, 0.0, idx("v", {i, t}));
            map.v[i][t] = {b};
            p.binaries.push_back(b);
        } else {
            for (int w = 0; w < W; ++w) {
                const int b = lp.add_var(0.0, 1.0, 0.0, idx("v", {i, t, w}));
                map.v[i][t].push_back(b);
                p.binaries.push_back(b);
            }
        }
    }
    if (opt.soft_departure) {
        map.slack[i] = lp.add_var(0.0, v.soc_dep, opt.penalty, idx("sigma", {i}));
    }

    // Temperature expression (variable, constant offset) for scenario w at step t.
    auto temp_of = [&](int t, int w) -> std::pair<int, double> {
        if (collapsed) return {map.temp[i][t][0], off[t][w]};
        return {map.temp[i][t][w], 0.0};
    };
    // Scenarios whose rows are emitted: all of them, or the binding one when collapsed.
    auto scenarios_for = [&](int t, bool want_max) {
        std::vector<int> ws;
        if (!collapsed) {
            for (int w = 0; w < W; ++w) ws.push_back(w);
            return ws;
        }
        int best = 0;
        for (int w = 1; w < W; ++w)
            if (want_max ? off[t][w] > off[t][best] : off[t][w] < off[t][best]) best = w;
        ws.push_back(best);
        return ws;
    };

    for (int t = v.ta; t < v.td; ++t) {
        const int pc = map.p_chg[i][t], ph = map.p_heat[i][t];
        lp.add_constraint({{map.soc[i][t + 1], 1.0}, {map.soc[i][t], -1.0}, {pc, -th.eta_chg * dt / v.capacity}},
                          Relation::Equal, 0.0, idx("soc_bal", {i, t}));
        ++rows["soc"];
        const int n_thermal = collapsed ? 1 : W;
        for (int w = 0; w < n_thermal; ++w) {
            const double amb = collapsed ? amb_ref[t] : s.temp_amb[w][t];
            const int cur = collapsed ? map.temp[i][t][0] : map.temp[i][t][w];
            const int nxt = collapsed ? map.temp[i][t + 1][0] : map.temp[i][t + 1][w];
            lp.add_constraint({{nxt, mc / dt}, {cur, -mc / dt + loss}, {ph, -th.eta_heat}, {pc, -(1.0 - th.eta_chg)}},
                              Relation::Equal, loss * amb, collapsed ? idx("heat_bal", {i, t}) : idx("heat_bal", {i, t, w}));
            ++rows["thermal"];
        }
        lp.add_constraint({{pc, 1.0}, {ph, 1.0}}, Relation::LessEqual, v.p_max, idx("p_total", {i, t}));
        ++rows["total_power"];
        if (t == v.ta) continue;  // arrival-step limits are variable bounds

        for (int w : scenarios_for(t, true)) {
            const auto [T, d] = temp_of(t, w);
            lp.add_constraint({{ph, 1.0}, {T, v.beta_heat}}, Relation::LessEqual, v.ph_bar - v.beta_heat * d,
                              idx("heat_cap", {i, t, w}));
            ++rows["heat_cap"];
        }
        for (int w : scenarios_for(t, false)) {
            const auto [T, d] = temp_of(t, w);
            lp.add_constraint({{pc, 1.0}, {T, -v.beta_chg}}, Relation::LessEqual, v.pc_bar + v.beta_chg * d,
                              idx("chg_cap", {i, t, w}));
            ++rows["chg_cap"];
        }
        if (opt.rule == RuleForm::Reduced) {
            const int b = map.v[i][t][0];
            for (int w : scenarios_for(t, false)) {
                const auto [T, d] = temp_of(t, w);
                lp.add_constraint({{pc, 1.0}, {T, -th.mu_chg}, {b, M_P}}, Relation::LessEqual, M_P + th.mu_chg * d,
                                  idx("rule_p", {i, t, w}));
                lp.add_constraint({{b, M_T}, {T, 1.0}}, Relation::GreaterEqual, th.T_set - d, idx("rule_T", {i, t, w}));
                rows["rule_power"] += 1;
                rows["rule_temp"] += 1;
            }
        } else {
            for (int w = 0; w < W; ++w) {
                const int b = map.v[i][t][w];
                const auto [T, d] = temp_of(t, w);
                lp.add_constraint({{pc, 1.0}, {T, -th.mu_chg}, {b, M_P}}, Relation::LessEqual, M_P + th.mu_chg * d,
                                  idx("rule_p", {i, t, w}));
                lp.add_constraint({{b, M_T}, {T, 1.0}}, Relation::GreaterEqual, th.T_set - d, idx("rule_T", {i, t, w}));
                rows["rule_power"] += 1;
                rows["rule_temp"] += 1;
            }
        }
    }
    std::vector<Term> dep{{map.soc[i][v.td], 1.0}};
    if (map.slack[i] >= 0) dep.push_back({map.slack[i], 1.0});
    lp.add_constraint(std::move(dep), Relation::GreaterEqual, v.soc_dep, idx("departure", {i}));
    ++rows["departure"];
}

BuiltModel build_centralized(const StationModel& m, const ScenarioSet& s, const BuildOptions& opt) {
    m.validate();
    s.validate(m.grid.n_steps);
    BuiltModel b;
    b.map = empty_map(m, s, opt.form);
    auto& lp = b.problem.lp;
    const int T = m.grid.n_steps, W = s.size();
    for (int t = 0; t < T; ++t)
        for (int w = 0; w < W; ++w) {
            b.map.p_pv[t][w] = lp.add_var(0.0, s.pv_cap[w][t], 0.0, idx("p_pv", {t, w}));
            b.map.p_grid[t][w] =
                lp.add_var(0.0, m.pg_max, s.prob[w] * m.tariff.price[t] * m.grid.dt, idx("p_grid", {t, w}));
        }
    for (int i = 0; i < m.n(); ++i) add_vehicle_block(b.problem, b.map, m, s, i, opt);
    for (int t = 0; t < T; ++t)
        for (int w = 0; w < W; ++w) {
            std::vector<Term> row{{b.map.p_pv[t][w], 1.0}, {b.map.p_grid[t][w], 1.0}};
            for (int i = 0; i < m.n(); ++i) {
                if (b.map.p_chg[i][t] < 0) continue;
                row.push_back({b.map.p_chg[i][t], -1.0});
                row.push_back({b.map.p_heat[i][t], -1.0});
            }
            lp.add_constraint(std::move(row), Relation::Equal, 0.0, idx("balance", {t, w}));
            ++b.map.rows["balance"];
        }
    return b;
}

void extract_powers(const VariableMap& map, const std::vector<double>& x, std::vector<std::vector<double>>& p_chg,
                    std::vector<std::vector<double>>& p_heat) {
    p_chg.assign(map.n_vehicles, std::vector<double>(map.n_steps, 0.0));
    p_heat = p_chg;
    for (int i = 0; i < map.n_vehicles; ++i)
        for (int t = 0; t < map.n_steps; ++t) {
            if (map.p_chg[i][t] < 0) continue;
            p_chg[i][t] = std::max(0.0, x[map.p_chg[i][t]]);
            p_heat[i][t] = std::max(0.0, x[map.p_heat[i][t]]);
        }
}

namespace {

std::string diagnose(const StationModel& m, const ScenarioSet& s, const BuildOptions& opt) {
    // Departure requirement: does the model become feasible with slack?
    if (!opt.soft_departure) {
        BuildOptions soft = opt;
        soft.soft_departure = true;
        soft.form = Formulation::Collapsed;
        const auto b = build_centralized(m, s, soft);
        milp::MilpOptions mo;
        mo.node_limit = 200;
        const auto r = milp::solve_milp(b.problem, mo);
        if (r.has_solution()) {
            std::string who;
            for (int i = 0; i < m.n(); ++i)
                if (r.x[b.map.slack[i]] > 1e-6) who += (who.empty() ? "" : ", ") + m.fleet[i].id;
            return "departure SoC requirement cannot be met (vehicles: " + who + ")";
        }
    }
    // Per-vehicle temperature box / heating limits.
    for (int i = 0; i < m.n(); ++i) {
        milp::MilpProblem p;
        VariableMap map = empty_map(m, s, Formulation::Collapsed);
        BuildOptions one = opt;
        one.soft_departure = true;
        one.form = Formulation::Collapsed;
        try {
            add_vehicle_block(p, map, m, s, i, one);
        } catch (const Error& e) {
            return e.what();
        }
        milp::MilpOptions mo;
        mo.node_limit = 200;
        if (milp::solve_milp(p, mo).status == milp::MilpStatus::Infeasible)
            return "temperature range / heating limit cannot be kept for vehicle '" + m.fleet[i].id + "'";
    }
    return "grid limit and solar cannot cover the heating needed to keep batteries in range";
}

}  // namespace

Schedule solve_centralized(const StationModel& m, const ScenarioSet& s, const SolveLimits& lim,
                           const BuildOptions& opt_in) {
    BuildOptions opt = opt_in;
    opt.form = Formulation::Collapsed;
    opt.rule = RuleForm::Reduced;
    const BuiltModel b = build_centralized(m, s, opt);
    milp::MilpOptions mo;
    mo.time_limit = lim.time_limit;
    mo.gap_tol = lim.gap_tol;
    mo.node_limit = lim.node_limit;
    const auto r = milp::solve_milp(b.problem, mo);
    if (r.status == milp::MilpStatus::Infeasible)
        throw Error(ErrorCode::Infeasible, "centralized model infeasible: " + diagnose(m, s, opt));
    if (r.status == milp::MilpStatus::Unbounded) throw Error(ErrorCode::Internal, "centralized model unbounded");
    if (!r.has_solution()) throw Error(ErrorCode::Timeout, "time limit reached without a feasible schedule");

    std::vector<std::vector<double>> pc, ph;
    extract_powers(b.map, r.x, pc, ph);
    Schedule sch = replay_here_and_now(m, s, pc, ph, "tcsc-central");

    // The solver's own trajectories must agree with the replay.
    double dev = 0.0;
    for (int i = 0; i < m.n(); ++i) {
        const auto& v = m.fleet[i];
        for (int t = v.ta; t <= v.td; ++t) {
            dev = std::max(dev, std::abs(r.x[b.map.soc[i][t]] - sch.soc[0][i][t]));
            for (int w = 0; w < s.size(); ++w)
                dev = std::max(dev, std::abs(r.x[b.map.temp[i][t][0]] + b.map.offset[i][t][w] - sch.temp[w][i][t]));
        }
    }
    if (dev > 1e-4) {
        std::ostringstream os;
        os << "solver trajectories deviate from replay by " << dev;
        throw Error(ErrorCode::Internal, os.str());
    }
    sch.status = milp::to_string(r.status);
    sch.solver_objective = r.objective;
    sch.gap = r.gap;
    sch.nodes = r.nodes;
    sch.wall_time = r.wall_time;
    return sch;
}

EquivalenceReport check_rule_equivalence(const StationModel& m, const ScenarioSet& s, double tol,
                                         const BuildOptions& opt) {
    BuildOptions a = opt, b = opt;
    a.form = b.form = Formulation::Full;
    a.rule = RuleForm::Reduced;
    b.rule = RuleForm::PerScenario;
    milp::MilpOptions mo;
    mo.gap_tol = 0.0;
    const auto ra = milp::solve_milp(build_centralized(m, s, a).problem, mo);
    const auto rb = milp::solve_milp(build_centralized(m, s, b).problem, mo);
    EquivalenceReport rep;
    rep.reduced_objective = ra.objective;
    rep.per_scenario_objective = rb.objective;
    if (ra.status != rb.status) {
        rep.detail = std::string("status differs: reduced ") + milp::to_string(ra.status) + ", per-scenario " +
                     milp::to_string(rb.status);
        return rep;
    }
    if (ra.status != milp::MilpStatus::Optimal) {
        rep.equal = true;
        rep.detail = std::string("both ") + milp::to_string(ra.status);
        return rep;
    }
    rep.equal = std::abs(ra.objective - rb.objective) <= tol * std::max(1.0, std::abs(ra.objective));
    std::ostringstream os;
    os << std::setprecision(12) << "reduced " << ra.objective << " vs per-scenario " << rb.objective;
    rep.detail = os.str();
    return rep;
}

}  // namespace tcsc
