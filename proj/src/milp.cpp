#include "tcsc/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace tcsc::milp {

using lp::Basis;
using lp::kInf;
using lp::LpSolution;
using lp::LpStatus;
using Clock = std::chrono::steady_clock;

void MilpProblem::validate() const {
    lp.validate();
    for (int j : binaries)
        if (j < 0 || j >= lp.n_vars)
            throw lp::ProblemError("binary index " + std::to_string(j) + " outside [0, " +
                                   std::to_string(lp.n_vars) + ")");
}

const char* to_string(MilpStatus s) {
    switch (s) {
        case MilpStatus::Optimal: return "optimal";
        case MilpStatus::Feasible: return "feasible";
        case MilpStatus::Infeasible: return "infeasible";
        case MilpStatus::Unbounded: return "unbounded";
        case MilpStatus::TimeLimit: return "time_limit";
    }
    return "unknown";
}

lp::LpProblem relax(const MilpProblem& p) {
    lp::LpProblem r = p.lp;
    for (int j : p.binaries) {
        r.lower[j] = std::max(r.lower[j], 0.0);
        r.upper[j] = std::min(r.upper[j], 1.0);
    }
    return r;
}

namespace {

struct BoundChange {
    int idx;  // position in the binary list
    double lo, hi;
};

struct Node {
    long id;
    double bound;
    std::vector<BoundChange> changes;  // cumulative from the root
    std::shared_ptr<const Basis> basis;
    // branching that created this node, for pseudocost learning
    int branch_k = -1;
    int dir = 0;  // 0 down, 1 up
    double frac = 0.0;
    double parent_obj = 0.0;
};

// Per-unit objective gains observed when branching on each binary.
struct Pseudocosts {
    std::vector<double> sum[2];
    std::vector<int> count[2];
    double total[2] = {0.0, 0.0};
    int total_count[2] = {0, 0};

    explicit Pseudocosts(std::size_t k) {
        for (int d = 0; d < 2; ++d) {
            sum[d].assign(k, 0.0);
            count[d].assign(k, 0);
        }
    }
    void add(int k, int d, double per_unit) {
        per_unit = std::max(0.0, per_unit);
        sum[d][k] += per_unit;
        ++count[d][k];
        total[d] += per_unit;
        ++total_count[d];
    }
    double get(int k, int d) const {
        if (count[d][k] > 0) return sum[d][k] / count[d][k];
        return total_count[d] > 0 ? total[d] / total_count[d] : 1.0;
    }
    bool reliable(int k, int rel) const { return std::min(count[0][k], count[1][k]) >= rel; }
};

double branch_score(double down, double up) {
    constexpr double eps = 1e-6;
    return std::max(down, eps) * std::max(up, eps);
}

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;
    }
};

}  // namespace

struct MilpSolver::Impl {
    MilpProblem prob;
    MilpOptions opt;
    lp::Simplex sx;
    std::vector<double> root_lo, root_hi;  // binary bounds at the root
    Basis root_basis;
    Pseudocosts pc{0};
    std::vector<std::vector<std::pair<int, double>>> bin_rows;  // rows touching each binary

    // search state
    Clock::time_point start;
    MilpSolution result;
    double incumbent = kInf;

    Impl(MilpProblem p, MilpOptions o)
        : prob((p.validate(), std::move(p))), opt(o), sx(relax(prob), o.lp) {
        for (int j : prob.binaries) {
            root_lo.push_back(std::max(prob.lp.lower[j], 0.0));
            root_hi.push_back(std::min(prob.lp.upper[j], 1.0));
        }
        pc = Pseudocosts(prob.binaries.size());
        std::vector<int> pos(prob.lp.n_vars, -1);
        for (std::size_t k = 0; k < prob.binaries.size(); ++k) pos[prob.binaries[k]] = static_cast<int>(k);
        bin_rows.resize(prob.binaries.size());
        for (int r = 0; r < prob.lp.n_rows(); ++r)
            for (const auto& t : prob.lp.constraints[r].terms)
                if (pos[t.var] >= 0) bin_rows[pos[t.var]].emplace_back(r, t.coef);
    }

    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
    double remaining() const { return opt.time_limit - elapsed(); }
    bool out_of_time() const { return std::isfinite(opt.time_limit) && remaining() <= 0.0; }

    double prune_tol(double inc) const { return std::max(opt.abs_gap_tol, opt.gap_tol * std::abs(inc)); }

    void apply(const std::vector<BoundChange>& changes) {
        std::vector<double> lo = root_lo, hi = root_hi;
        for (const auto& c : changes) {
            lo[c.idx] = c.lo;
            hi[c.idx] = c.hi;
        }
        for (std::size_t k = 0; k < prob.binaries.size(); ++k) {
            const int j = prob.binaries[k];
            if (sx.var_lower(j) != lo[k] || sx.var_upper(j) != hi[k]) sx.set_var_bounds(j, lo[k], hi[k]);
        }
    }

    LpSolution solve_lp(bool warm) {
        if (std::isfinite(opt.time_limit)) sx.set_deadline_seconds(remaining());
        LpSolution s = warm ? sx.reoptimize() : sx.solve_primal();
        if (s.status == LpStatus::NumericalError || s.status == LpStatus::IterationLimit) {
            sx.reset_basis();
            s = sx.solve_primal();
        }
        return s;
    }

    // Most fractional binary (lowest index on ties); -1 when integral.
    int branch_var(const std::vector<double>& x) const {
        int best = -1;
        double best_frac = opt.int_tol;
        for (std::size_t k = 0; k < prob.binaries.size(); ++k) {
            const double v = x[prob.binaries[k]];
            const double f = std::min(v - std::floor(v), std::ceil(v) - v);
            if (f > best_frac) {
                best_frac = f;
                best = static_cast<int>(k);
            }
        }
        return best;
    }

    struct Choice {
        int k = -1;
        double child_bound[2] = {-kInf, -kInf};
    };

    // Reliability branching: pseudocost scores, with iteration-limited strong
    // branching on candidates whose pseudocosts are not yet reliable.
    Choice select_branch(const LpSolution& s, const std::vector<BoundChange>& changes) {
        Choice c;
        struct Cand {
            int k;
            double f;
            double score;
        };
        std::vector<Cand> cands;
        for (std::size_t k = 0; k < prob.binaries.size(); ++k) {
            const double v = s.x[prob.binaries[k]];
            const double f = v - std::floor(v);
            if (std::min(f, 1.0 - f) <= opt.int_tol) continue;
            const int kk = static_cast<int>(k);
            cands.push_back({kk, f, branch_score(f * pc.get(kk, 0), (1.0 - f) * pc.get(kk, 1))});
        }
        if (cands.empty()) return c;
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.k < b.k;
        });
        if (opt.strong_candidates > 0 && opt.reliability > 0) {
            const Basis saved = sx.basis();
            const long saved_limit = sx.iteration_limit();
            sx.set_iteration_limit(opt.strong_iterations);
            int evaluated = 0;
            double best = -1.0;
            int best_k = -1;
            double best_bounds[2] = {-kInf, -kInf};
            int since_improved = 0;
            for (const Cand& cd : cands) {
                if (evaluated >= opt.strong_candidates || since_improved >= opt.strong_lookahead) break;
                if (pc.reliable(cd.k, opt.reliability)) {
                    // reliable candidates keep their pseudocost score
                    if (cd.score > best) {
                        best = cd.score;
                        best_k = cd.k;
                        best_bounds[0] = best_bounds[1] = -kInf;
                        since_improved = 0;
                    } else {
                        ++since_improved;
                    }
                    continue;
                }
                if (out_of_time()) break;
                ++evaluated;
                double obj[2];
                bool infeasible[2] = {false, false};
                const int j = prob.binaries[cd.k];
                const double lo = sx.var_lower(j), hi = sx.var_upper(j);
                for (int d = 0; d < 2; ++d) {
                    const double v = d == 0 ? 0.0 : 1.0;
                    sx.set_var_bounds(j, v, v);
                    if (std::isfinite(opt.time_limit)) sx.set_deadline_seconds(remaining());
                    const LpSolution r = sx.reoptimize();
                    if (r.status == LpStatus::Infeasible) {
                        infeasible[d] = true;
                        obj[d] = kInf;
                    } else if (r.status == LpStatus::Optimal || r.status == LpStatus::IterationLimit) {
                        obj[d] = std::max(s.objective, r.objective);
                    } else {
                        obj[d] = s.objective;
                    }
                    sx.set_var_bounds(j, lo, hi);
                    sx.set_basis(saved);
                }
                if (!infeasible[0]) pc.add(cd.k, 0, (obj[0] - s.objective) / cd.f);
                if (!infeasible[1]) pc.add(cd.k, 1, (obj[1] - s.objective) / (1.0 - cd.f));
                double score;
                if (infeasible[0] || infeasible[1]) {
                    score = kInf;
                } else {
                    score = branch_score(obj[0] - s.objective, obj[1] - s.objective);
                }
                if (score > best) {
                    best = score;
                    best_k = cd.k;
                    best_bounds[0] = obj[0];
                    best_bounds[1] = obj[1];
                    since_improved = 0;
                } else {
                    ++since_improved;
                }
                if (infeasible[0] || infeasible[1]) break;
            }
            sx.set_iteration_limit(saved_limit);
            (void)changes;
            if (best_k >= 0) {
                c.k = best_k;
                c.child_bound[0] = best_bounds[0];
                c.child_bound[1] = best_bounds[1];
                return c;
            }
        }
        c.k = cands.front().k;
        return c;
    }

    // Fixes binaries to their rounded values and re-solves, so the incumbent
    // has exactly integral binaries and consistent continuous values.
    void try_incumbent(const LpSolution& s, const std::vector<BoundChange>& changes, long nodes) {
        std::vector<BoundChange> fixed = changes;
        bool exact = true;
        for (std::size_t k = 0; k < prob.binaries.size(); ++k) {
            const double v = s.x[prob.binaries[k]];
            const double r = std::round(v);
            if (v != r) exact = false;
            fixed.push_back({static_cast<int>(k), r, r});
        }
        std::vector<double> x = s.x;
        double obj = s.objective;
        if (!exact) {
            apply(fixed);
            const LpSolution p = solve_lp(true);
            if (p.status != LpStatus::Optimal) return;
            x = p.x;
            obj = p.objective;
        }
        for (int j : prob.binaries) x[j] = std::round(x[j]);
        if (obj < incumbent && opt.polish) polish(x, obj);
        if (obj < incumbent) {
            incumbent = obj;
            result.x = std::move(x);
            result.objective = obj;
            result.incumbent_history.emplace_back(nodes, obj);
        }
    }

    // Flips binaries whose flip keeps the current point feasible, then re-solves
    // the LP with the new fixing. Repeats while the objective improves.
    void polish(std::vector<double>& x, double& obj) {
        for (int round = 0; round < 8 && !out_of_time(); ++round) {
            std::vector<double> act(prob.lp.n_rows(), 0.0);
            for (int r = 0; r < prob.lp.n_rows(); ++r)
                for (const auto& t : prob.lp.constraints[r].terms) act[r] += t.coef * x[t.var];
            std::vector<double> val(prob.binaries.size());
            bool flipped = false;
            for (std::size_t k = 0; k < prob.binaries.size(); ++k) {
                const int j = prob.binaries[k];
                val[k] = x[j];
                const double nv = 1.0 - x[j];
                if (nv < root_lo[k] || nv > root_hi[k]) continue;
                const double delta = nv - x[j];
                bool ok = true;
                for (const auto& [r, a] : bin_rows[k]) {
                    const double v = act[r] + a * delta;
                    const auto& con = prob.lp.constraints[r];
                    const double tol = 1e-9 * (1.0 + std::abs(con.rhs));
                    if (con.rel != lp::Relation::GreaterEqual && v > con.rhs + tol) ok = false;
                    if (con.rel != lp::Relation::LessEqual && v < con.rhs - tol) ok = false;
                }
                if (!ok) continue;
                for (const auto& [r, a] : bin_rows[k]) act[r] += a * delta;
                val[k] = nv;
                flipped = true;
            }
            if (!flipped) return;
            std::vector<BoundChange> fixed;
            for (std::size_t k = 0; k < val.size(); ++k) fixed.push_back({static_cast<int>(k), val[k], val[k]});
            apply(fixed);
            const LpSolution p = solve_lp(true);
            if (p.status != LpStatus::Optimal || p.objective >= obj - 1e-9 * (1.0 + std::abs(obj))) return;
            x = p.x;
            for (int j : prob.binaries) x[j] = std::round(x[j]);
            obj = p.objective;
        }
    }

    // Rounds fractional binaries in chunks, re-solving after each chunk.
    void dive(const LpSolution& start_sol, std::vector<BoundChange> changes, long nodes) {
        LpSolution cur = start_sol;
        const Basis saved = sx.basis();
        for (int round = 0; round < 64; ++round) {
            if (out_of_time()) break;
            if (cur.objective >= incumbent - prune_tol(incumbent)) break;
            std::vector<std::pair<double, int>> frac;
            for (std::size_t k = 0; k < prob.binaries.size(); ++k) {
                const double v = cur.x[prob.binaries[k]];
                const double f = std::abs(v - std::round(v));
                if (f > opt.int_tol) frac.emplace_back(f, static_cast<int>(k));
            }
            if (frac.empty()) {
                try_incumbent(cur, changes, nodes);
                break;
            }
            std::sort(frac.begin(), frac.end());
            const std::size_t chunk = std::max<std::size_t>(1, frac.size() / 4);
            const std::size_t base = changes.size();
            for (std::size_t t = 0; t < chunk; ++t) {
                const int k = frac[t].second;
                const double r = std::round(cur.x[prob.binaries[k]]);
                changes.push_back({k, r, r});
            }
            apply(changes);
            LpSolution next = solve_lp(true);
            if (next.status != LpStatus::Optimal) {
                for (std::size_t t = base; t < changes.size(); ++t) {
                    const double r = 1.0 - changes[t].lo;
                    changes[t].lo = changes[t].hi = r;
                }
                apply(changes);
                next = solve_lp(true);
                if (next.status != LpStatus::Optimal) break;
            }
            cur = std::move(next);
        }
        sx.set_basis(saved);
    }

    MilpSolution solve() {
        start = Clock::now();
        result = MilpSolution{};
        incumbent = kInf;
        pc = Pseudocosts(prob.binaries.size());
        long nodes = 0;

        apply({});
        if (!root_basis.empty()) sx.set_basis(root_basis);
        LpSolution root = solve_lp(!root_basis.empty());
        ++nodes;
        result.nodes = nodes;
        if (root.status == LpStatus::Infeasible) {
            result.status = MilpStatus::Infeasible;
            return finish(-kInf, false);
        }
        if (root.status == LpStatus::Unbounded) {
            result.status = MilpStatus::Unbounded;
            return finish(-kInf, false);
        }
        if (root.status != LpStatus::Optimal) return finish(-kInf, true);
        root_basis = sx.basis();

        std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
        long next_id = 0;
        double lost_bound = kInf;  // bounds of nodes dropped for numerical reasons
        bool limited = false;

        auto process = [&](const LpSolution& s, const Node& node) {
            const Choice ch = select_branch(s, node.changes);
            const int k = ch.k;
            if (k < 0) {
                try_incumbent(s, node.changes, nodes);
                return;
            }
            const double f = s.x[prob.binaries[k]] - std::floor(s.x[prob.binaries[k]]);
            auto basis = std::make_shared<const Basis>(sx.basis());
            for (int side = 0; side < 2; ++side) {
                const double cb = std::max(s.objective, ch.child_bound[side]);
                if (cb >= incumbent - prune_tol(incumbent)) continue;
                Node child{next_id++, cb, node.changes, basis, k, side, side == 0 ? f : 1.0 - f, s.objective};
                const double v = side == 0 ? 0.0 : 1.0;
                bool found = false;
                for (auto& c : child.changes)
                    if (c.idx == k) {
                        c.lo = c.hi = v;
                        found = true;
                    }
                if (!found) child.changes.push_back({k, v, v});
                open.push(std::move(child));
            }
        };

        const Node root_node{next_id++, root.objective, {}, nullptr};
        if (opt.root_dive && branch_var(root.x) >= 0) {
            dive(root, {}, nodes);
            apply({});
        }
        process(root, root_node);

        while (!open.empty()) {
            if (open.top().bound >= incumbent - prune_tol(incumbent)) {
                open = {};
                break;
            }
            if (out_of_time() || (opt.node_limit >= 0 && nodes >= opt.node_limit)) {
                limited = true;
                break;
            }
            Node node = open.top();
            open.pop();
            apply(node.changes);
            if (node.basis) sx.set_basis(*node.basis);
            const LpSolution s = solve_lp(true);
            ++nodes;
            if (s.status == LpStatus::TimeLimit) {
                open.push(std::move(node));
                limited = true;
                break;
            }
            if (s.status == LpStatus::Infeasible) continue;
            if (s.status != LpStatus::Optimal) {
                lost_bound = std::min(lost_bound, node.bound);
                continue;
            }
            if (node.branch_k >= 0 && node.frac > 0.0)
                pc.add(node.branch_k, node.dir, (s.objective - node.parent_obj) / node.frac);
            if (s.objective >= incumbent - prune_tol(incumbent)) continue;
            if (opt.dive_every > 0 && nodes % opt.dive_every == 0 && branch_var(s.x) >= 0) {
                const Basis b = sx.basis();
                dive(s, node.changes, nodes);
                apply(node.changes);
                sx.set_basis(b);
            }
            process(s, node);
        }
        result.nodes = nodes;
        double bound = std::min(incumbent, lost_bound);
        if (!open.empty()) bound = std::min(bound, open.top().bound);
        if (!std::isfinite(incumbent) && open.empty() && !std::isfinite(lost_bound)) {
            result.status = MilpStatus::Infeasible;
            return finish(bound, false);
        }
        return finish(bound, limited);
    }

    MilpSolution finish(double bound, bool limited) {
        result.wall_time = elapsed();
        result.hit_limit = limited;
        result.bound = bound;
        if (result.status == MilpStatus::Infeasible || result.status == MilpStatus::Unbounded) {
            result.x.clear();
            result.gap = kInf;
            return result;
        }
        if (!result.has_solution()) {
            result.status = MilpStatus::TimeLimit;
            result.gap = kInf;
            return result;
        }
        const double diff = std::max(0.0, result.objective - bound);
        result.gap = diff <= opt.abs_gap_tol ? 0.0 : diff / std::max(std::abs(result.objective), 1e-9);
        result.status = diff <= prune_tol(result.objective) ? MilpStatus::Optimal : MilpStatus::Feasible;
        return result;
    }
};

MilpSolver::MilpSolver(MilpProblem problem, MilpOptions options)
    : impl_(std::make_unique<Impl>(std::move(problem), options)) {}
MilpSolver::~MilpSolver() = default;
MilpSolver::MilpSolver(MilpSolver&&) noexcept = default;
MilpSolver& MilpSolver::operator=(MilpSolver&&) noexcept = default;

void MilpSolver::set_objective(std::span<const double> cost, double offset) {
    impl_->prob.lp.objective.assign(cost.begin(), cost.end());
    impl_->prob.lp.objective_offset = offset;
    impl_->sx.set_objective(cost);
    impl_->sx.set_objective_offset(offset);
}

void MilpSolver::set_time_limit(double seconds) { impl_->opt.time_limit = seconds; }

void MilpSolver::set_var_bounds(int j, double lo, double hi) {
    auto& im = *impl_;
    im.prob.lp.lower[j] = lo;
    im.prob.lp.upper[j] = hi;
    const auto it = std::find(im.prob.binaries.begin(), im.prob.binaries.end(), j);
    if (it != im.prob.binaries.end()) {
        const auto k = static_cast<std::size_t>(it - im.prob.binaries.begin());
        im.root_lo[k] = std::max(lo, 0.0);
        im.root_hi[k] = std::min(hi, 1.0);
    } else {
        im.sx.set_var_bounds(j, lo, hi);
    }
}

MilpSolution MilpSolver::solve() { return impl_->solve(); }

const MilpProblem& MilpSolver::problem() const { return impl_->prob; }

MilpSolution solve_milp(const MilpProblem& p, const MilpOptions& opt) {
    MilpSolver s(p, opt);
    return s.solve();
}

}  // namespace tcsc::milp
