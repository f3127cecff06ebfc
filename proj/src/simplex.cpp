#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "basis_factor.hpp"
#include "tcsc/lp.hpp"

namespace tcsc::lp {

using detail::BasisFactor;
using detail::CscMatrix;
using Clock = std::chrono::steady_clock;

namespace {

double pow2_round(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
    return std::exp2(std::round(std::log2(s)));
}

enum class LoopResult { Optimal, Infeasible, Unbounded, IterationLimit, TimeLimit, Numerical };

}  // namespace

// Internal layout: columns 0..n-1 are structurals, n..n+m-1 are row logicals.
// Row r reads  a_r x + s_r = 0  with  s_r in [-row_upper, -row_lower], so the
// logical column is +e_r and every right-hand side is zero.
struct Simplex::Impl {
    LpOptions opt;
    int n = 0;
    int m = 0;
    CscMatrix a;                  // scaled structural columns
    std::vector<int> row_start;   // scaled row-wise copy
    std::vector<int> row_index;
    std::vector<double> row_value;
    std::vector<double> col_scale, row_scale;
    std::vector<double> lo, up, cost;  // scaled, size n + m
    std::vector<double> x;             // scaled values, size n + m
    std::vector<VarStatus> status;
    std::vector<int> basic;   // position -> variable
    std::vector<int> pos_of;  // variable -> position or -1
    std::vector<double> d;    // reduced costs (dual simplex bookkeeping)
    BasisFactor factor;
    bool factor_valid = false;
    long iterations = 0;
    std::optional<Clock::time_point> deadline;

    // scratch
    std::vector<double> work_m, work_m2, row_alpha;

    Impl(const LpProblem& p, LpOptions o) : opt(o) {
        p.validate();
        n = p.n_vars;
        m = p.n_rows();
        build_matrix(p);
        lo.assign(n + m, 0.0);
        up.assign(n + m, 0.0);
        cost.assign(n + m, 0.0);
        for (int j = 0; j < n; ++j) {
            lo[j] = p.lower[j] / col_scale[j];
            up[j] = p.upper[j] / col_scale[j];
            cost[j] = p.objective[j] * col_scale[j];
        }
        for (int r = 0; r < m; ++r) {
            const auto& c = p.constraints[r];
            double rlo = -kInf, rup = kInf;
            if (c.rel != Relation::LessEqual) rlo = c.rhs;
            if (c.rel != Relation::GreaterEqual) rup = c.rhs;
            lo[n + r] = -rup * row_scale[r];
            up[n + r] = -rlo * row_scale[r];
        }
        x.assign(n + m, 0.0);
        d.assign(n + m, 0.0);
        work_m.assign(m, 0.0);
        work_m2.assign(m, 0.0);
        row_alpha.assign(n + m, 0.0);
        slack_basis();
    }

    void build_matrix(const LpProblem& p) {
        std::vector<int> count(n, 0);
        for (const auto& c : p.constraints)
            for (const Term& t : c.terms) ++count[t.var];
        a.n_rows = m;
        a.n_cols = n;
        a.start.assign(n + 1, 0);
        for (int j = 0; j < n; ++j) a.start[j + 1] = a.start[j] + count[j];
        a.index.assign(a.start[n], 0);
        a.value.assign(a.start[n], 0.0);
        std::vector<int> fill(a.start.begin(), a.start.end() - 1);
        for (int r = 0; r < m; ++r) {
            for (const Term& t : p.constraints[r].terms) {
                a.index[fill[t.var]] = r;
                a.value[fill[t.var]++] = t.coef;
            }
        }
        // Merge duplicate (row, col) entries.
        {
            std::vector<int> last(m, -1);
            CscMatrix merged;
            merged.n_rows = m;
            merged.n_cols = n;
            merged.start.assign(n + 1, 0);
            for (int j = 0; j < n; ++j) {
                const int begin = static_cast<int>(merged.index.size());
                for (int q = a.start[j]; q < a.start[j + 1]; ++q) {
                    const int r = a.index[q];
                    if (last[r] >= begin) {
                        merged.value[last[r]] += a.value[q];
                    } else {
                        last[r] = static_cast<int>(merged.index.size());
                        merged.index.push_back(r);
                        merged.value.push_back(a.value[q]);
                    }
                }
                merged.start[j + 1] = static_cast<int>(merged.index.size());
            }
            a = std::move(merged);
        }

        col_scale.assign(n, 1.0);
        row_scale.assign(m, 1.0);
        if (opt.scale && m > 0 && n > 0) {
            for (int pass = 0; pass < 6; ++pass) {
                std::vector<double> rmin(m, kInf), rmax(m, 0.0);
                for (int j = 0; j < n; ++j)
                    for (int q = a.start[j]; q < a.start[j + 1]; ++q) {
                        const double v = std::abs(a.value[q]) * row_scale[a.index[q]] * col_scale[j];
                        if (v == 0.0) continue;
                        rmin[a.index[q]] = std::min(rmin[a.index[q]], v);
                        rmax[a.index[q]] = std::max(rmax[a.index[q]], v);
                    }
                for (int r = 0; r < m; ++r)
                    if (rmax[r] > 0.0) row_scale[r] /= std::sqrt(rmin[r] * rmax[r]);
                for (int j = 0; j < n; ++j) {
                    double cmin = kInf, cmax = 0.0;
                    for (int q = a.start[j]; q < a.start[j + 1]; ++q) {
                        const double v = std::abs(a.value[q]) * row_scale[a.index[q]] * col_scale[j];
                        if (v == 0.0) continue;
                        cmin = std::min(cmin, v);
                        cmax = std::max(cmax, v);
                    }
                    if (cmax > 0.0) col_scale[j] /= std::sqrt(cmin * cmax);
                }
            }
            for (auto& s : row_scale) s = pow2_round(s);
            for (auto& s : col_scale) s = pow2_round(s);
            for (int j = 0; j < n; ++j)
                for (int q = a.start[j]; q < a.start[j + 1]; ++q)
                    a.value[q] *= row_scale[a.index[q]] * col_scale[j];
        }

        row_start.assign(m + 1, 0);
        for (int q = 0; q < a.start[n]; ++q) ++row_start[a.index[q] + 1];
        for (int r = 0; r < m; ++r) row_start[r + 1] += row_start[r];
        row_index.assign(a.start[n], 0);
        row_value.assign(a.start[n], 0.0);
        std::vector<int> row_fill(row_start.begin(), row_start.end() - 1);
        for (int j = 0; j < n; ++j)
            for (int q = a.start[j]; q < a.start[j + 1]; ++q) {
                row_index[row_fill[a.index[q]]] = j;
                row_value[row_fill[a.index[q]]++] = a.value[q];
            }
    }

    // ---- basis bookkeeping -------------------------------------------------

    VarStatus default_nonbasic(int j) const {
        if (std::isfinite(lo[j])) return VarStatus::AtLower;
        if (std::isfinite(up[j])) return VarStatus::AtUpper;
        return VarStatus::Zero;
    }

    double nonbasic_value(int j) const {
        switch (status[j]) {
            case VarStatus::AtLower: return lo[j];
            case VarStatus::AtUpper: return up[j];
            default: return 0.0;
        }
    }

    void slack_basis() {
        status.assign(n + m, VarStatus::Basic);
        basic.resize(m);
        pos_of.assign(n + m, -1);
        for (int j = 0; j < n; ++j) {
            status[j] = default_nonbasic(j);
            x[j] = nonbasic_value(j);
        }
        for (int r = 0; r < m; ++r) {
            basic[r] = n + r;
            pos_of[n + r] = r;
        }
        factor_valid = false;
    }

    // Keeps nonbasic statuses consistent with (possibly changed) bounds.
    void sync_nonbasic(int j) {
        if (status[j] == VarStatus::Basic) return;
        if (status[j] == VarStatus::AtLower && !std::isfinite(lo[j])) status[j] = default_nonbasic(j);
        if (status[j] == VarStatus::AtUpper && !std::isfinite(up[j])) status[j] = default_nonbasic(j);
        if (status[j] == VarStatus::Zero && (std::isfinite(lo[j]) || std::isfinite(up[j])))
            status[j] = default_nonbasic(j);
        x[j] = nonbasic_value(j);
    }

    bool time_up() const { return deadline && Clock::now() >= *deadline; }

    void refactor() {
        for (int attempt = 0; attempt < 3; ++attempt) {
            if (factor.factorize(a, basic)) {
                factor_valid = true;
                return;
            }
            // Replace unpivotable columns by logicals of the spare rows.
            const auto& bad = factor.singular_positions();
            const auto& spare = factor.spare_rows();
            for (std::size_t t = 0; t < bad.size(); ++t) {
                const int k = bad[t];
                const int out = basic[k];
                const int in = n + spare[t];
                pos_of[out] = -1;
                status[out] = default_nonbasic(out);
                if (status[out] == VarStatus::AtLower && std::isfinite(up[out]) &&
                    std::abs(x[out] - up[out]) < std::abs(x[out] - lo[out]))
                    status[out] = VarStatus::AtUpper;
                x[out] = nonbasic_value(out);
                if (pos_of[in] >= 0) {
                    // logical already basic elsewhere; cannot happen for a spare row
                    continue;
                }
                basic[k] = in;
                pos_of[in] = k;
                status[in] = VarStatus::Basic;
            }
        }
        factor_valid = factor.factorize(a, basic);
    }

    template <class F>
    void for_col(int j, F&& f) const {
        if (j < n) {
            for (int q = a.start[j]; q < a.start[j + 1]; ++q) f(a.index[q], a.value[q]);
        } else {
            f(j - n, 1.0);
        }
    }

    double col_dot(int j, const std::vector<double>& y) const {
        if (j >= n) return y[j - n];
        double s = 0.0;
        for (int q = a.start[j]; q < a.start[j + 1]; ++q) s += a.value[q] * y[a.index[q]];
        return s;
    }

    void compute_primal() {
        std::vector<double>& rhs = work_m;
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (int j = 0; j < n + m; ++j) {
            if (status[j] == VarStatus::Basic) continue;
            x[j] = nonbasic_value(j);
            if (x[j] == 0.0) continue;
            const double v = x[j];
            for_col(j, [&](int r, double val) { rhs[r] -= val * v; });
        }
        factor.ftran(rhs);
        for (int k = 0; k < m; ++k) x[basic[k]] = rhs[k];
    }

    // y = B^{-T} c_B with the given basic costs; returns y in work_m2.
    void compute_y(const std::vector<double>& cb) {
        std::vector<double>& y = work_m2;
        y = cb;
        factor.btran(y);
    }

    void compute_reduced_costs() {
        std::vector<double> cb(m);
        for (int k = 0; k < m; ++k) cb[k] = cost[basic[k]];
        compute_y(cb);
        for (int j = 0; j < n + m; ++j)
            d[j] = status[j] == VarStatus::Basic ? 0.0 : cost[j] - col_dot(j, work_m2);
    }

    double infeasibility(int j) const {
        if (x[j] < lo[j]) return lo[j] - x[j];
        if (x[j] > up[j]) return x[j] - up[j];
        return 0.0;
    }

    void pivot_in(int q, int k, int leaving, VarStatus leave_status, const std::vector<double>& alpha) {
        basic[k] = q;
        pos_of[q] = k;
        status[q] = VarStatus::Basic;
        pos_of[leaving] = -1;
        status[leaving] = leave_status;
        factor.update(k, alpha);
    }

    // ---- primal simplex ----------------------------------------------------

    LoopResult primal_loop() {
        const double ptol = opt.primal_tol, dtol = opt.dual_tol, piv = opt.pivot_tol;
        std::vector<double> cb(m), alpha(m);
        long degenerate = 0;
        bool bland = false;
        int verify_rounds = 0;
        if (!factor_valid || factor.num_updates() > 0) refactor();
        compute_primal();

        for (;;) {
            if (iterations >= opt.max_iterations) return LoopResult::IterationLimit;
            if ((iterations & 31) == 0 && time_up()) return LoopResult::TimeLimit;
            if (factor.num_updates() >= opt.refactor_interval) {
                refactor();
                compute_primal();
            }

            bool phase1 = false;
            for (int k = 0; k < m; ++k) {
                const int j = basic[k];
                if (x[j] < lo[j] - ptol) {
                    cb[k] = -1.0;
                    phase1 = true;
                } else if (x[j] > up[j] + ptol) {
                    cb[k] = 1.0;
                    phase1 = true;
                } else {
                    cb[k] = 0.0;
                }
            }
            if (!phase1)
                for (int k = 0; k < m; ++k) cb[k] = cost[basic[k]];
            compute_y(cb);
            const std::vector<double>& y = work_m2;

            int q = -1;
            int dir = 0;
            double best = 0.0;
            for (int j = 0; j < n + m; ++j) {
                const VarStatus s = status[j];
                if (s == VarStatus::Basic) continue;
                if (lo[j] == up[j]) continue;
                const double dj = (phase1 ? 0.0 : cost[j]) - col_dot(j, y);
                int jdir = 0;
                if (dj < -dtol && (s == VarStatus::AtLower || s == VarStatus::Zero)) jdir = 1;
                else if (dj > dtol && (s == VarStatus::AtUpper || s == VarStatus::Zero)) jdir = -1;
                if (jdir == 0) continue;
                if (bland) {
                    q = j;
                    dir = jdir;
                    break;
                }
                if (std::abs(dj) > best) {
                    best = std::abs(dj);
                    q = j;
                    dir = jdir;
                }
            }

            if (q < 0) {
                if (factor.num_updates() > 0 && verify_rounds < 3) {
                    ++verify_rounds;
                    refactor();
                    compute_primal();
                    continue;
                }
                if (phase1) return LoopResult::Infeasible;
                return LoopResult::Optimal;
            }

            std::fill(alpha.begin(), alpha.end(), 0.0);
            for_col(q, [&](int r, double v) { alpha[r] = v; });
            factor.ftran(alpha);

            // Harris two-pass ratio test; rate = change of basic k per unit step.
            double tmax = kInf;
            for (int k = 0; k < m; ++k) {
                const double rate = -dir * alpha[k];
                if (std::abs(rate) < piv) continue;
                const int j = basic[k];
                double t = kInf;
                if (x[j] < lo[j] - ptol) {
                    if (rate > 0) t = (lo[j] - x[j] + ptol) / rate;
                } else if (x[j] > up[j] + ptol) {
                    if (rate < 0) t = (x[j] - up[j] + ptol) / -rate;
                } else if (rate < 0) {
                    if (std::isfinite(lo[j])) t = (x[j] - lo[j] + ptol) / -rate;
                } else {
                    if (std::isfinite(up[j])) t = (up[j] - x[j] + ptol) / rate;
                }
                tmax = std::min(tmax, t);
            }
            const double flip = up[q] - lo[q];

            int leave_k = -1;
            double step = 0.0;
            bool leave_to_upper = false;
            if (!std::isfinite(flip) && !std::isfinite(tmax)) {
                if (phase1) return LoopResult::Numerical;
                return LoopResult::Unbounded;
            }
            if (flip <= tmax) {
                step = flip;
            } else if (std::isfinite(tmax)) {
                double best_alpha = 0.0;
                for (int k = 0; k < m; ++k) {
                    const double rate = -dir * alpha[k];
                    if (std::abs(rate) < piv) continue;
                    const int j = basic[k];
                    double t = kInf;
                    bool to_upper = false;
                    if (x[j] < lo[j] - ptol) {
                        if (rate > 0) t = (lo[j] - x[j]) / rate;
                    } else if (x[j] > up[j] + ptol) {
                        if (rate < 0) {
                            t = (x[j] - up[j]) / -rate;
                            to_upper = true;
                        }
                    } else if (rate < 0) {
                        if (std::isfinite(lo[j])) t = (x[j] - lo[j]) / -rate;
                    } else if (std::isfinite(up[j])) {
                        t = (up[j] - x[j]) / rate;
                        to_upper = true;
                    }
                    if (t > tmax) continue;
                    const double mag = std::abs(alpha[k]);
                    const bool better = bland ? j < basic[leave_k] : mag > best_alpha;
                    if (leave_k < 0 || better) {
                        best_alpha = mag;
                        leave_k = k;
                        step = std::max(t, 0.0);
                        leave_to_upper = to_upper;
                    }
                }
                // Variables inside the feasible band leaving in the increasing
                // direction hit their upper bound.
                if (leave_k >= 0) {
                    const int j = basic[leave_k];
                    const double rate = -dir * alpha[leave_k];
                    if (!(x[j] < lo[j] - ptol) && !(x[j] > up[j] + ptol)) leave_to_upper = rate > 0;
                }
            } else {
                if (phase1) return LoopResult::Numerical;
                return LoopResult::Unbounded;
            }

            ++iterations;
            if (step <= 1e-12) {
                if (++degenerate > opt.bland_after_degenerate) bland = true;
            } else {
                degenerate = 0;
                bland = false;
            }

            const double dxq = dir * step;
            x[q] += dxq;
            for (int k = 0; k < m; ++k) x[basic[k]] -= alpha[k] * dxq;

            if (leave_k < 0) {
                status[q] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
                x[q] = nonbasic_value(q);
                continue;
            }
            const int leaving = basic[leave_k];
            const VarStatus ls = leave_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
            if (std::abs(alpha[leave_k]) < 1e-11) {
                refactor();
                compute_primal();
                continue;
            }
            pivot_in(q, leave_k, leaving, ls, alpha);
            x[leaving] = nonbasic_value(leaving);
            if (status[leaving] == VarStatus::AtLower && !std::isfinite(lo[leaving])) sync_nonbasic(leaving);
            if (status[leaving] == VarStatus::AtUpper && !std::isfinite(up[leaving])) sync_nonbasic(leaving);
        }
    }

    // ---- dual simplex ------------------------------------------------------

    // Flips boxed nonbasics to the bound matching their reduced cost sign.
    // Returns false if some nonbasic is dual infeasible and cannot be flipped.
    bool make_dual_feasible() {
        const double dtol = opt.dual_tol;
        bool flipped = false;
        for (int j = 0; j < n + m; ++j) {
            const VarStatus s = status[j];
            if (s == VarStatus::Basic || lo[j] == up[j]) continue;
            if (s == VarStatus::AtLower && d[j] < -dtol) {
                if (!std::isfinite(up[j])) return false;
                status[j] = VarStatus::AtUpper;
                flipped = true;
            } else if (s == VarStatus::AtUpper && d[j] > dtol) {
                if (!std::isfinite(lo[j])) return false;
                status[j] = VarStatus::AtLower;
                flipped = true;
            } else if (s == VarStatus::Zero && std::abs(d[j]) > dtol) {
                return false;
            }
        }
        if (flipped) compute_primal();
        return true;
    }

    double max_dual_infeasibility() const {
        double worst = 0.0;
        for (int j = 0; j < n + m; ++j) {
            const VarStatus s = status[j];
            if (s == VarStatus::Basic || lo[j] == up[j]) continue;
            if (s == VarStatus::AtLower || s == VarStatus::Zero) worst = std::max(worst, -d[j]);
            if (s == VarStatus::AtUpper || s == VarStatus::Zero) worst = std::max(worst, d[j]);
        }
        return worst;
    }

    LoopResult dual_loop() {
        const double ptol = opt.primal_tol, dtol = opt.dual_tol, piv = opt.pivot_tol;
        std::vector<double> rho(m), alpha(m);
        std::vector<int> touched;
        touched.reserve(n + m);

        for (;;) {
            if (iterations >= opt.max_iterations) return LoopResult::IterationLimit;
            if ((iterations & 31) == 0 && time_up()) return LoopResult::TimeLimit;
            if (factor.num_updates() >= opt.refactor_interval) {
                refactor();
                compute_primal();
                compute_reduced_costs();
            }

            int r = -1;
            double worst = ptol;
            for (int k = 0; k < m; ++k) {
                const double v = infeasibility(basic[k]);
                if (v > worst) {
                    worst = v;
                    r = k;
                }
            }
            if (r < 0) return LoopResult::Optimal;

            const int p = basic[r];
            const bool to_lower = x[p] < lo[p];
            const double target = to_lower ? lo[p] : up[p];

            std::fill(rho.begin(), rho.end(), 0.0);
            rho[r] = 1.0;
            factor.btran(rho);

            touched.clear();
            for (int i = 0; i < m; ++i) {
                const double ri = rho[i];
                if (ri == 0.0) continue;
                for (int q = row_start[i]; q < row_start[i + 1]; ++q) {
                    const int j = row_index[q];
                    if (row_alpha[j] == 0.0) touched.push_back(j);
                    row_alpha[j] += ri * row_value[q];
                }
                if (row_alpha[n + i] == 0.0) touched.push_back(n + i);
                row_alpha[n + i] += ri;
            }

            // Harris dual ratio test.
            auto eligible = [&](int j, double aj) {
                const VarStatus s = status[j];
                if (s == VarStatus::Basic || lo[j] == up[j] || std::abs(aj) < piv) return false;
                const bool inc = s == VarStatus::AtLower || s == VarStatus::Zero;
                const bool dec = s == VarStatus::AtUpper || s == VarStatus::Zero;
                // x_p moves by -aj * dx_j; it must move toward target.
                if (to_lower) return (inc && aj < 0) || (dec && aj > 0);
                return (inc && aj > 0) || (dec && aj < 0);
            };
            auto dual_slack = [&](int j) {
                const VarStatus s = status[j];
                if (s == VarStatus::AtLower) return std::max(d[j], 0.0);
                if (s == VarStatus::AtUpper) return std::max(-d[j], 0.0);
                return 0.0;
            };
            double tmax = kInf;
            for (int j : touched) {
                const double aj = row_alpha[j];
                if (!eligible(j, aj)) continue;
                tmax = std::min(tmax, (dual_slack(j) + dtol) / std::abs(aj));
            }
            int q = -1;
            double best_alpha = 0.0;
            if (std::isfinite(tmax)) {
                for (int j : touched) {
                    const double aj = row_alpha[j];
                    if (!eligible(j, aj)) continue;
                    if (dual_slack(j) / std::abs(aj) > tmax) continue;
                    if (std::abs(aj) > best_alpha || (std::abs(aj) == best_alpha && j < q)) {
                        best_alpha = std::abs(aj);
                        q = j;
                    }
                }
            }
            if (q < 0) {
                for (int j : touched) row_alpha[j] = 0.0;
                return LoopResult::Infeasible;
            }
            const double arq = row_alpha[q];

            std::fill(alpha.begin(), alpha.end(), 0.0);
            for_col(q, [&](int i, double v) { alpha[i] = v; });
            factor.ftran(alpha);
            if (std::abs(alpha[r] - arq) > 1e-7 * (1.0 + std::abs(arq)) || std::abs(alpha[r]) < 1e-11) {
                for (int j : touched) row_alpha[j] = 0.0;
                refactor();
                compute_primal();
                compute_reduced_costs();
                if (!make_dual_feasible()) return LoopResult::Numerical;
                ++iterations;
                continue;
            }

            ++iterations;
            const double dxq = (x[p] - target) / alpha[r];
            x[q] += dxq;
            for (int k = 0; k < m; ++k) x[basic[k]] -= alpha[k] * dxq;

            const double theta = d[q] / arq;
            for (int j : touched) {
                if (status[j] != VarStatus::Basic) d[j] -= theta * row_alpha[j];
                row_alpha[j] = 0.0;
            }
            d[q] = 0.0;
            d[p] = -theta;

            pivot_in(q, r, p, to_lower ? VarStatus::AtLower : VarStatus::AtUpper, alpha);
            x[p] = target;
        }
    }

    // ---- drivers -----------------------------------------------------------

    LpSolution finish(LoopResult res) {
        LpSolution sol;
        sol.iterations = iterations;
        switch (res) {
            case LoopResult::Optimal: sol.status = LpStatus::Optimal; break;
            case LoopResult::Infeasible: sol.status = LpStatus::Infeasible; break;
            case LoopResult::Unbounded: sol.status = LpStatus::Unbounded; break;
            case LoopResult::IterationLimit: sol.status = LpStatus::IterationLimit; break;
            case LoopResult::TimeLimit: sol.status = LpStatus::TimeLimit; break;
            case LoopResult::Numerical: sol.status = LpStatus::NumericalError; break;
        }
        sol.x.resize(n);
        for (int j = 0; j < n; ++j) sol.x[j] = x[j] * col_scale[j];
        if (sol.status == LpStatus::Optimal) {
            // Snap nonbasic values exactly to their bounds.
            for (int j = 0; j < n; ++j)
                if (status[j] != VarStatus::Basic) sol.x[j] = nonbasic_value(j) * col_scale[j];
            compute_reduced_costs();
            sol.row_duals.resize(m);
            for (int r = 0; r < m; ++r) sol.row_duals[r] = work_m2[r] * row_scale[r];
            sol.reduced_costs.resize(n);
            for (int j = 0; j < n; ++j) sol.reduced_costs[j] = d[j] / col_scale[j];
        }
        return sol;
    }

    LpSolution primal() {
        const LoopResult res = primal_loop();
        LpSolution sol = finish(res);
        if (res == LoopResult::Optimal) {
            double obj = 0.0;
            for (int j = 0; j < n; ++j) obj += cost[j] * x[j];
            sol.objective = obj;
        }
        return sol;
    }

    LpSolution dual() {
        if (!factor_valid || factor.num_updates() > 0) refactor();
        compute_primal();
        compute_reduced_costs();
        if (!make_dual_feasible()) return primal();
        LoopResult res = dual_loop();
        if (res == LoopResult::Optimal) {
            refactor();
            compute_primal();
            compute_reduced_costs();
            bool primal_ok = true;
            for (int k = 0; k < m; ++k)
                if (infeasibility(basic[k]) > opt.primal_tol) primal_ok = false;
            if (!primal_ok || max_dual_infeasibility() > opt.dual_tol) return primal();
        } else if (res == LoopResult::Numerical) {
            return primal();
        }
        LpSolution sol = finish(res);
        // A dual feasible basis bounds the optimum from below even when stopped early.
        if (res == LoopResult::Optimal || res == LoopResult::IterationLimit) {
            double obj = 0.0;
            for (int j = 0; j < n; ++j) obj += cost[j] * x[j];
            sol.objective = obj;
        }
        return sol;
    }
};

Simplex::Simplex(const LpProblem& problem, LpOptions options)
    : impl_(std::make_unique<Impl>(problem, options)) {
    objective_offset_ = problem.objective_offset;
}
Simplex::~Simplex() = default;
Simplex::Simplex(Simplex&&) noexcept = default;
Simplex& Simplex::operator=(Simplex&&) noexcept = default;

LpSolution Simplex::solve_primal() {
    impl_->iterations = 0;
    LpSolution s = impl_->primal();
    s.objective += objective_offset_;
    return s;
}

LpSolution Simplex::reoptimize() {
    impl_->iterations = 0;
    LpSolution s = impl_->dual();
    s.objective += objective_offset_;
    return s;
}

void Simplex::set_var_bounds(int j, double lo, double hi) {
    auto& im = *impl_;
    im.lo[j] = lo / im.col_scale[j];
    im.up[j] = hi / im.col_scale[j];
    im.sync_nonbasic(j);
}

double Simplex::var_lower(int j) const { return impl_->lo[j] * impl_->col_scale[j]; }
double Simplex::var_upper(int j) const { return impl_->up[j] * impl_->col_scale[j]; }

void Simplex::set_objective(std::span<const double> c) {
    auto& im = *impl_;
    for (int j = 0; j < im.n; ++j) im.cost[j] = c[j] * im.col_scale[j];
}

Basis Simplex::basis() const { return Basis{impl_->status}; }

void Simplex::set_basis(const Basis& b) {
    auto& im = *impl_;
    if (static_cast<int>(b.status.size()) != im.n + im.m) return;
    const auto n_basic = std::count(b.status.begin(), b.status.end(), VarStatus::Basic);
    if (n_basic != im.m) return;
    im.status = b.status;
    int k = 0;
    std::fill(im.pos_of.begin(), im.pos_of.end(), -1);
    for (int j = 0; j < im.n + im.m; ++j) {
        if (im.status[j] == VarStatus::Basic) {
            im.basic[k] = j;
            im.pos_of[j] = k++;
        } else {
            im.sync_nonbasic(j);
        }
    }
    im.factor_valid = false;
}

void Simplex::reset_basis() { impl_->slack_basis(); }

void Simplex::set_iteration_limit(long n) { impl_->opt.max_iterations = n; }
long Simplex::iteration_limit() const { return impl_->opt.max_iterations; }

void Simplex::set_deadline_seconds(double s) {
    if (!std::isfinite(s) || s > 1e9) {  // beyond the clock range: no deadline
        impl_->deadline.reset();
        return;
    }
    impl_->deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                         std::chrono::duration<double>(std::max(s, 0.0)));
}

void Simplex::clear_deadline() { impl_->deadline.reset(); }

int Simplex::n_vars() const { return impl_->n; }
int Simplex::n_rows() const { return impl_->m; }

LpSolution solve_lp(const LpProblem& p, const LpOptions& opt) {
    Simplex s(p, opt);
    if (std::isfinite(opt.time_limit)) s.set_deadline_seconds(opt.time_limit);
    return s.solve_primal();
}

}  // namespace tcsc::lp
