#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "tcsc/lp.hpp"

namespace tcsc::milp {

/// LP plus a set of binary variables (their bounds are intersected with [0,1]).
struct MilpProblem {
    lp::LpProblem lp;
    std::vector<int> binaries;

    void validate() const;
};

enum class MilpStatus { Optimal, Feasible, Infeasible, Unbounded, TimeLimit };

const char* to_string(MilpStatus s);

struct MilpSolution {
    MilpStatus status = MilpStatus::TimeLimit;
    std::vector<double> x;  // empty when no incumbent was found
    double objective = lp::kInf;
    double bound = -lp::kInf;  // best proven lower bound
    double gap = lp::kInf;     // relative gap, 0 when closed
    long nodes = 0;
    double wall_time = 0.0;
    bool hit_limit = false;  // stopped by time or node limit
    /// (node count, objective) every time the incumbent improved.
    std::vector<std::pair<long, double>> incumbent_history;

    bool has_solution() const { return !x.empty(); }
};

struct MilpOptions {
    double time_limit = lp::kInf;  // seconds
    double gap_tol = 1e-4;         // relative
    double abs_gap_tol = 1e-9;
    double int_tol = 1e-6;
    long node_limit = -1;  // < 0: unlimited
    int dive_every = 200;  // nodes between diving rounds; 0 disables periodic dives
    bool root_dive = true;
    bool polish = true;  // flip-and-resolve improvement of new incumbents
    // reliability branching
    int reliability = 4;         // observations per direction before pseudocosts are trusted
    int strong_candidates = 8;   // strong-branching evaluations per node; 0 uses pseudocosts only
    int strong_lookahead = 4;    // stop after this many candidates without improvement
    long strong_iterations = 60; // dual simplex iterations per strong-branching child
    lp::LpOptions lp;
};

/// Binaries become continuous on their [0,1] bounds; everything else unchanged.
lp::LpProblem relax(const MilpProblem& p);

/// Best-bound branch and bound on LP relaxations. Children start from the
/// parent's basis and are re-solved with the dual simplex.
MilpSolution solve_milp(const MilpProblem& p, const MilpOptions& opt = {});

/// Reusable solver for a fixed constraint set whose objective changes
/// between solves; each root LP warm-starts from the previous root basis.
class MilpSolver {
public:
    MilpSolver(MilpProblem problem, MilpOptions options = {});
    ~MilpSolver();
    MilpSolver(MilpSolver&&) noexcept;
    MilpSolver& operator=(MilpSolver&&) noexcept;

    void set_objective(std::span<const double> cost, double offset = 0.0);
    void set_time_limit(double seconds);
    void set_var_bounds(int j, double lo, double hi);
    MilpSolution solve();

    const MilpProblem& problem() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tcsc::milp
