#include "tcsc/decentral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace tcsc {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kTol = 1e-9;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> demand(const std::vector<VehiclePlan>& plans, int n_steps) {
    std::vector<double> d(n_steps, 0.0);
    for (const auto& p : plans)
        for (int t = 0; t < n_steps; ++t) d[t] += p.p_chg[t] + p.p_heat[t];
    return d;
}

double max_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

milp::MilpOptions sub_options() {
    milp::MilpOptions o;
    o.gap_tol = 1e-6;
    return o;
}

VehiclePlan read_plan(const VariableMap& map, const std::vector<double>& x, int i, int n_steps) {
    VehiclePlan p;
    p.vehicle = i;
    p.p_chg.assign(n_steps, 0.0);
    p.p_heat.assign(n_steps, 0.0);
    for (int t = 0; t < n_steps; ++t) {
        if (map.p_chg[i][t] >= 0) p.p_chg[t] = std::max(0.0, x[map.p_chg[i][t]]);
        if (map.p_heat[i][t] >= 0) p.p_heat[t] = std::max(0.0, x[map.p_heat[i][t]]);
    }
    if (map.slack[i] >= 0) p.slack = std::max(0.0, x[map.slack[i]]);
    return p;
}

void set_power_cost(std::vector<double>& c, const VariableMap& map, int i, const StationModel& m,
                    const std::vector<double>* alpha) {
    for (int t = 0; t < m.grid.n_steps; ++t) {
        const double price = (m.tariff.price[t] + (alpha ? (*alpha)[t] : 0.0)) * m.grid.dt;
        if (map.p_chg[i][t] >= 0) c[map.p_chg[i][t]] = price;
        if (map.p_heat[i][t] >= 0) c[map.p_heat[i][t]] = price;
    }
}

}  // namespace

std::vector<double> hat_ppv(const std::vector<VehiclePlan>& plans, const ScenarioSet& s, int n_steps) {
    const auto d = demand(plans, n_steps);
    std::vector<double> h(n_steps);
    for (int t = 0; t < n_steps; ++t) h[t] = std::min(s.min_pv(t), d[t]);
    return h;
}

std::vector<double> compute_excess(const std::vector<VehiclePlan>& plans, const std::vector<double>& hat,
                                   double pg_max) {
    const int T = static_cast<int>(hat.size());
    auto d = demand(plans, T);
    for (int t = 0; t < T; ++t) d[t] -= hat[t] + pg_max;
    return d;
}

void dual_update(DualState& st) {
    if (!(st.step_size > 0.0)) throw Error(ErrorCode::Invalid, "step size must be positive");
    if (st.alpha.size() != st.delta.size()) throw Error(ErrorCode::Invalid, "multiplier and excess lengths differ");
    for (std::size_t t = 0; t < st.alpha.size(); ++t) st.alpha[t] = std::max(0.0, st.alpha[t] + st.delta[t] * st.step_size);
    ++st.iteration;
}

std::vector<FlexEntry> flexibility_rank(const std::vector<VehiclePlan>& plans, const std::vector<double>& delta) {
    std::vector<FlexEntry> out;
    for (const auto& p : plans) {
        double fl = 0.0;
        for (std::size_t t = 0; t < delta.size(); ++t) fl += std::max(delta[t], 0.0) * (p.p_chg[t] + p.p_heat[t]);
        out.push_back({p.vehicle, fl});
    }
    std::stable_sort(out.begin(), out.end(), [](const FlexEntry& a, const FlexEntry& b) {
        return a.fl != b.fl ? a.fl > b.fl : a.vehicle < b.vehicle;
    });
    return out;
}

std::vector<int> select_balancing(const std::vector<VehiclePlan>& plans, std::vector<double> delta) {
    std::vector<int> chosen;
    std::vector<VehiclePlan> left = plans;
    const auto congested = [&] { return std::any_of(delta.begin(), delta.end(), [](double d) { return d > kTol; }); };
    while (congested() && !left.empty()) {
        const auto rank = flexibility_rank(left, delta);
        if (rank.front().fl <= 0.0) break;
        const int pick = rank.front().vehicle;
        const auto it = std::find_if(left.begin(), left.end(), [&](const VehiclePlan& p) { return p.vehicle == pick; });
        for (std::size_t t = 0; t < delta.size(); ++t) delta[t] -= it->p_chg[t] + it->p_heat[t];
        chosen.push_back(pick);
        left.erase(it);
    }
    return chosen;
}

double proxy_objective(const StationModel& m, const std::vector<VehiclePlan>& plans, const std::vector<double>& hat) {
    const auto d = demand(plans, m.grid.n_steps);
    double c = 0.0;
    for (int t = 0; t < m.grid.n_steps; ++t) c += m.tariff.price[t] * (d[t] - hat[t]) * m.grid.dt;
    return c;
}

double expected_objective(const StationModel& m, const ScenarioSet& s, const std::vector<VehiclePlan>& plans) {
    const auto d = demand(plans, m.grid.n_steps);
    double c = 0.0;
    for (int w = 0; w < s.size(); ++w)
        for (int t = 0; t < m.grid.n_steps; ++t)
            c += s.prob[w] * m.tariff.price[t] * std::max(0.0, d[t] - s.pv_cap[w][t]) * m.grid.dt;
    return c;
}

// ---- vehicle subproblem ----------------------------------------------------------

struct VehicleSubproblem::Impl {
    const StationModel& m;
    int vehicle;
    VariableMap map;
    std::vector<double> cost;
    std::unique_ptr<milp::MilpSolver> solver;

    Impl(const StationModel& model, const ScenarioSet& s, int i, BuildOptions opt) : m(model), vehicle(i) {
        opt.form = Formulation::Collapsed;
        opt.rule = RuleForm::Reduced;
        milp::MilpProblem p;
        map = empty_map(m, s, Formulation::Collapsed);
        add_vehicle_block(p, map, m, s, i, opt);
        cost = p.lp.objective;
        solver = std::make_unique<milp::MilpSolver>(std::move(p), sub_options());
    }
};

VehicleSubproblem::VehicleSubproblem(const StationModel& m, const ScenarioSet& s, int vehicle, const BuildOptions& opt)
    : impl_(std::make_unique<Impl>(m, s, vehicle, opt)) {}
VehicleSubproblem::~VehicleSubproblem() = default;
VehicleSubproblem::VehicleSubproblem(VehicleSubproblem&&) noexcept = default;
VehicleSubproblem& VehicleSubproblem::operator=(VehicleSubproblem&&) noexcept = default;

VehiclePlan VehicleSubproblem::solve(const std::vector<double>& alpha, double time_limit) {
    auto& im = *impl_;
    const int T = im.m.grid.n_steps;
    if (static_cast<int>(alpha.size()) != T) throw Error(ErrorCode::Invalid, "multiplier length differs from horizon");
    for (double a : alpha)
        if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::Invalid, "multipliers must be finite and >= 0");
    set_power_cost(im.cost, im.map, im.vehicle, im.m, &alpha);
    im.solver->set_objective(im.cost);
    im.solver->set_time_limit(time_limit);
    const auto r = im.solver->solve();
    const auto& id = im.m.fleet[im.vehicle].id;
    if (r.status == milp::MilpStatus::Infeasible)
        throw Error(ErrorCode::Infeasible, "vehicle " + id + " has no feasible plan");
    if (!r.has_solution()) throw Error(ErrorCode::Timeout, "vehicle " + id + ": no plan within the time limit");
    VehiclePlan p = read_plan(im.map, r.x, im.vehicle, T);
    p.objective = r.objective;
    return p;
}

VehiclePlan solve_vehicle_sub(const StationModel& m, const ScenarioSet& s, int vehicle,
                              const std::vector<double>& alpha, const BuildOptions& opt) {
    if (vehicle < 0 || vehicle >= m.n()) throw Error(ErrorCode::Invalid, "vehicle index out of range");
    return VehicleSubproblem(m, s, vehicle, opt).solve(alpha);
}

// ---- rescheduling ----------------------------------------------------------------

std::vector<VehiclePlan> reschedule(const StationModel& m, const ScenarioSet& s, const std::vector<int>& selected,
                                    const std::vector<VehiclePlan>& plans, double time_limit,
                                    const BuildOptions& opt_in) {
    BuildOptions opt = opt_in;
    opt.form = Formulation::Collapsed;
    opt.rule = RuleForm::Reduced;
    const int T = m.grid.n_steps;
    milp::MilpProblem p;
    VariableMap map = empty_map(m, s, Formulation::Collapsed);
    std::vector<bool> sel(m.n(), false);
    for (int i : selected) {
        if (i < 0 || i >= m.n() || sel[i]) throw Error(ErrorCode::Invalid, "bad balancing vehicle selection");
        sel[i] = true;
        add_vehicle_block(p, map, m, s, i, opt);
    }
    for (int i : selected) set_power_cost(p.lp.objective, map, i, m, nullptr);

    // Room left by the fixed vehicles. Demand up to pg_max plus the worst-case
    // solar keeps every scenario's grid draw within the limit.
    for (int t = 0; t < T; ++t) {
        double fixed = 0.0;
        for (const auto& q : plans)
            if (!sel[q.vehicle]) fixed += q.p_chg[t] + q.p_heat[t];
        std::vector<lp::Term> row;
        for (int i : selected) {
            if (map.p_chg[i][t] >= 0) row.push_back({map.p_chg[i][t], 1.0});
            if (map.p_heat[i][t] >= 0) row.push_back({map.p_heat[i][t], 1.0});
        }
        const double room = m.pg_max + s.min_pv(t) - fixed;
        if (row.empty()) continue;
        p.lp.add_constraint(std::move(row), lp::Relation::LessEqual, room, "room_" + std::to_string(t));
    }
    milp::MilpOptions mo;
    mo.time_limit = time_limit;
    const auto r = milp::solve_milp(p, mo);
    if (r.status == milp::MilpStatus::Infeasible)
        throw Error(ErrorCode::Infeasible, "balancing vehicles cannot fit in the remaining capacity");
    if (!r.has_solution()) throw Error(ErrorCode::Timeout, "rescheduling found no plan within the time limit");
    std::vector<VehiclePlan> out;
    for (int i : selected) {
        out.push_back(read_plan(map, r.x, i, T));
        out.back().objective = r.objective;
    }
    return out;
}

// ---- workflow --------------------------------------------------------------------

namespace {

// Fallback when the joint problem finds nothing in time: balancing vehicles are
// placed one by one into the room left by everyone already placed.
std::vector<VehiclePlan> reschedule_in_turn(const StationModel& m, const ScenarioSet& s,
                                            const std::vector<int>& selected, const std::vector<VehiclePlan>& plans,
                                            const DecentralOptions& opt) {
    auto work = plans;
    for (int i : selected) {
        work[i].p_chg.assign(m.grid.n_steps, 0.0);
        work[i].p_heat.assign(m.grid.n_steps, 0.0);
    }
    std::vector<VehiclePlan> out;
    for (int i : selected) {
        auto one = reschedule(m, s, {i}, work, opt.reschedule_seconds_per_vehicle, opt.build);
        work[i] = one.front();
        out.push_back(one.front());
    }
    return out;
}

}  // namespace

DecentralResult run_decentralized(const StationModel& m, const ScenarioSet& s, const DecentralOptions& opt) {
    m.validate();
    s.validate(m.grid.n_steps);
    if (opt.step_sizes.empty()) throw Error(ErrorCode::Invalid, "no step sizes given");
    for (double st : opt.step_sizes)
        if (!(st > 0.0)) throw Error(ErrorCode::Invalid, "step sizes must be positive");
    if (opt.n_iter < 1) throw Error(ErrorCode::Invalid, "iteration count must be at least 1");

    const auto t0 = Clock::now();
    const int n = m.n(), T = m.grid.n_steps;
    const double dual_budget = n * opt.dual_seconds_per_vehicle;
    DecentralResult res;

    std::vector<VehicleSubproblem> subs;
    subs.reserve(n);
    for (int i = 0; i < n; ++i) subs.emplace_back(m, s, i, opt.build);

    // Solves every vehicle at the given prices; empty when `budget_end` (seconds
    // since start) passed first.
    const auto solve_all = [&](const std::vector<double>& alpha, double budget_end, bool must) {
        std::vector<VehiclePlan> plans;
        for (int i = 0; i < n; ++i) {
            const double left = budget_end - since(t0);
            if (!must && left <= 0.0) return std::vector<VehiclePlan>{};
            const double limit = must ? opt.dual_seconds_per_vehicle : std::min(opt.dual_seconds_per_vehicle, left);
            try {
                plans.push_back(subs[i].solve(alpha, limit));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Timeout || must) throw;
                return std::vector<VehiclePlan>{};
            }
        }
        return plans;
    };

    // Prices start at zero for every step size, so the first round is shared.
    const std::vector<double> zero(T, 0.0);
    const auto first = solve_all(zero, dual_budget, true);

    const auto score_of = [&](const std::vector<VehiclePlan>& plans) {
        double sc = proxy_objective(m, plans, hat_ppv(plans, s, T));
        for (const auto& p : plans) sc += opt.build.penalty * p.slack;
        return sc;
    };

    // Each step size runs to its last iterate. The runs are ranked by remaining
    // excess (any non-positive excess counts as none), then by cost including
    // departure shortfall. Every run's last iterate, and the shared first round,
    // is kept as a starting point for balancing.
    struct Start {
        std::vector<VehiclePlan> plans;
        std::vector<double> alpha;
        double step;
        double score;
    };
    std::vector<Start> starts;
    int ranked_first = -1;
    double best_excess = lp::kInf, best_score = lp::kInf;
    const int n_sizes = static_cast<int>(opt.step_sizes.size());
    for (int k = 0; k < n_sizes; ++k) {
        const double step = opt.step_sizes[k];
        const double run_end = since(t0) + (dual_budget - since(t0)) / (n_sizes - k);
        DualState st{zero, {}, 0, step};
        auto plans = first;
        std::vector<double> used_alpha = zero;
        double mx = 0.0;
        bool converged = false;
        for (int it = 1; it <= opt.n_iter; ++it) {
            if (it > 1) {
                auto next = solve_all(st.alpha, run_end, false);
                if (next.empty()) {
                    res.budget_exhausted = true;
                    break;
                }
                plans = std::move(next);
                used_alpha = st.alpha;
            }
            const auto hat = hat_ppv(plans, s, T);
            st.delta = compute_excess(plans, hat, m.pg_max);
            mx = max_of(st.delta);
            res.trace.push_back({it, step, mx, std::accumulate(used_alpha.begin(), used_alpha.end(), 0.0),
                                 *std::min_element(used_alpha.begin(), used_alpha.end()),
                                 proxy_objective(m, plans, hat), expected_objective(m, s, plans)});
            const bool free = std::all_of(used_alpha.begin(), used_alpha.end(), [](double a) { return a == 0.0; });
            if (mx <= 0.0 && free) {
                converged = true;
                break;
            }
            dual_update(st);
        }
        const double excess = std::max(0.0, mx);
        const double score = score_of(plans);
        if (k == 0) starts.push_back({first, zero, step, score_of(first)});
        starts.push_back({plans, used_alpha, step, score});
        if (converged || excess < best_excess - kTol || (excess <= best_excess + kTol && score < best_score)) {
            best_excess = excess;
            best_score = score;
            ranked_first = static_cast<int>(starts.size()) - 1;
        }
        if (converged) {
            res.converged = true;
            break;
        }
    }

    const auto adopt = [&](const Start& st) {
        res.dual_plans = st.plans;
        res.alpha = st.alpha;
        res.step_size = st.step;
    };
    adopt(starts[ranked_first]);
    auto plans = res.dual_plans;

    if (!res.converged) {
        // Balancing vehicles absorb the remaining excess. The top-ranked start is
        // balanced first; the others follow while the budget lasts and replace it
        // when they end cheaper.
        const auto r0 = Clock::now();
        const double budget = n * opt.reschedule_seconds_per_vehicle;
        const auto balance = [&](std::vector<VehiclePlan> work, bool primary, std::vector<int>& selected) {
            const auto delta = compute_excess(work, hat_ppv(work, s, T), m.pg_max);
            selected = select_balancing(work, delta);
            if (selected.empty()) return work;
            const auto rank = flexibility_rank(work, delta);
            for (;;) {
                try {
                    const double left = std::max(1e-3, budget - since(r0));
                    std::vector<VehiclePlan> fresh;
                    try {
                        fresh = reschedule(m, s, selected, work, left, opt.build);
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::Timeout || !primary) throw;
                        fresh = reschedule_in_turn(m, s, selected, work, opt);
                    }
                    for (const auto& p : fresh) work[p.vehicle] = p;
                    return work;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::Infeasible || static_cast<int>(selected.size()) == n) throw;
                    // Not enough room: take the next vehicle in flexibility order.
                    for (const auto& f : rank)
                        if (std::find(selected.begin(), selected.end(), f.vehicle) == selected.end()) {
                            selected.push_back(f.vehicle);
                            break;
                        }
                }
            }
        };
        const auto total = [&](const std::vector<VehiclePlan>& ps) {
            double c = expected_objective(m, s, ps);
            for (const auto& p : ps) c += opt.build.penalty * p.slack;
            return c;
        };

        plans = balance(plans, true, res.selected);
        double best = total(plans);
        std::vector<int> order;
        for (int k = 0; k < static_cast<int>(starts.size()); ++k)
            if (k != ranked_first) order.push_back(k);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return starts[a].score < starts[b].score; });
        for (int k : order) {
            if (since(r0) >= budget) break;
            std::vector<int> sel;
            try {
                auto alt = balance(starts[k].plans, false, sel);
                const double c = total(alt);
                if (c < best - kTol * std::max(1.0, std::abs(best))) {
                    best = c;
                    plans = std::move(alt);
                    res.selected = std::move(sel);
                    adopt(starts[k]);
                }
            } catch (const Error&) {
                // this start cannot be balanced in time; keep the current best
            }
        }
    }

    std::vector<std::vector<double>> pc(n), ph(n);
    double penalty = 0.0;
    for (int i = 0; i < n; ++i) {
        pc[i] = plans[i].p_chg;
        ph[i] = plans[i].p_heat;
        penalty += opt.build.penalty * plans[i].slack;
    }
    res.schedule = replay_here_and_now(m, s, pc, ph, "tcsc-decent");
    if (!res.schedule.grid_ok) throw Error(ErrorCode::Internal, "decentralized schedule exceeds the grid limit");
    res.schedule.status = res.budget_exhausted ? "budget" : (res.converged ? "converged" : "rescheduled");
    res.schedule.solver_objective = res.schedule.expected_cost + penalty;
    res.schedule.gap = std::numeric_limits<double>::quiet_NaN();
    res.schedule.wall_time = since(t0);
    return res;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
    os << "iteration,step_size,max_delta,alpha_sum,alpha_min,proxy,expected\n";
    for (const auto& r : trace)
        os << r.iteration << ',' << r.step_size << ',' << r.max_delta << ',' << r.alpha_sum << ',' << r.alpha_min << ',' << r.proxy << ','
           << r.expected << '\n';
}

}  // namespace tcsc
