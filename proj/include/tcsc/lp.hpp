#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcsc::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Term {
    int var;
    double coef;
};

struct Constraint {
    std::vector<Term> terms;
    Relation rel = Relation::LessEqual;
    double rhs = 0.0;
    std::string name;
};

/// Raised for structurally invalid problems (bad indices, inverted bounds,
/// non-finite data). Solvers never throw for infeasible or unbounded input.
class ProblemError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Minimization LP in row form:  min c'x  s.t.  a_r x {<=,=,>=} b_r,  lo <= x <= hi.
struct LpProblem {
    int n_vars = 0;
    std::vector<double> objective;  // dense, size n_vars
    double objective_offset = 0.0;
    std::vector<Constraint> constraints;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::string> var_names;  // optional; empty or size n_vars

    int add_var(double lo, double hi, double cost = 0.0, std::string name = {});
    int add_constraint(std::vector<Term> terms, Relation rel, double rhs, std::string name = {});

    int n_rows() const { return static_cast<int>(constraints.size()); }
    std::size_t nnz() const;

    /// Throws ProblemError describing the first structural defect.
    void validate() const;

    double evaluate(std::span<const double> x) const;
    /// Largest absolute violation of any row or bound at x.
    double max_violation(std::span<const double> x) const;
    std::string var_name(int j) const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, TimeLimit, NumericalError };

const char* to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::NumericalError;
    std::vector<double> x;
    double objective = 0.0;
    std::vector<double> row_duals;      // y with  d = c - A'y
    std::vector<double> reduced_costs;  // d
    long iterations = 0;
};

struct LpOptions {
    double primal_tol = 1e-7;
    double dual_tol = 1e-7;
    double pivot_tol = 1e-9;
    long max_iterations = 5'000'000;
    double time_limit = kInf;  // seconds
    int refactor_interval = 100;
    int bland_after_degenerate = 1000;
    bool scale = true;
};

/// Nonbasic/basic state of every column (structurals then row logicals).
enum class VarStatus : std::int8_t { Basic, AtLower, AtUpper, Zero };

struct Basis {
    std::vector<VarStatus> status;  // size n_vars + n_rows
    bool empty() const { return status.empty(); }
};

/// Bounded-variable revised simplex over a fixed constraint matrix. Bounds and
/// costs can be changed between solves; the basis is kept so later solves
/// warm-start (dual simplex after bound changes, primal after cost changes).
class Simplex {
public:
    explicit Simplex(const LpProblem& problem, LpOptions options = {});
    ~Simplex();
    Simplex(Simplex&&) noexcept;
    Simplex& operator=(Simplex&&) noexcept;
    Simplex(const Simplex&) = delete;
    Simplex& operator=(const Simplex&) = delete;

    /// Primal simplex (phase 1 + phase 2) from the current basis.
    LpSolution solve_primal();
    /// Dual simplex from the current basis when it is dual feasible, primal otherwise.
    LpSolution reoptimize();

    void set_var_bounds(int j, double lo, double hi);
    double var_lower(int j) const;
    double var_upper(int j) const;
    void set_objective(std::span<const double> cost);
    void set_objective_offset(double offset) { objective_offset_ = offset; }

    Basis basis() const;
    void set_basis(const Basis& b);
    void reset_basis();

    void set_deadline_seconds(double seconds_from_now);
    void clear_deadline();
    /// Per-solve iteration cap. After an early stop of the dual simplex the
    /// reported objective is still a valid lower bound.
    void set_iteration_limit(long n);
    long iteration_limit() const;

    int n_vars() const;
    int n_rows() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double objective_offset_ = 0.0;
};

LpSolution solve_lp(const LpProblem& p, const LpOptions& opt = {});

/// CPLEX-style LP text. `binaries` lists variables written under "Binaries".
void write_lp_format(std::ostream& os, const LpProblem& p, std::span<const int> binaries = {});
/// Reads the dialect produced by write_lp_format. Returns the problem and the binary list.
LpProblem read_lp_format(std::istream& is, std::vector<int>* binaries = nullptr);

}  // namespace tcsc::lp
