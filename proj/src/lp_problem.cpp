#include "tcsc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tcsc::lp {

int LpProblem::add_var(double lo, double hi, double cost, std::string name) {
    lower.push_back(lo);
    upper.push_back(hi);
    objective.push_back(cost);
    if (!name.empty() || !var_names.empty()) {
        var_names.resize(static_cast<std::size_t>(n_vars));
        var_names.push_back(std::move(name));
    }
    return n_vars++;
}

int LpProblem::add_constraint(std::vector<Term> terms, Relation rel, double rhs, std::string name) {
    constraints.push_back(Constraint{std::move(terms), rel, rhs, std::move(name)});
    return n_rows() - 1;
}

std::size_t LpProblem::nnz() const {
    std::size_t n = 0;
    for (const auto& c : constraints) n += c.terms.size();
    return n;
}

std::string LpProblem::var_name(int j) const {
    if (j >= 0 && j < static_cast<int>(var_names.size()) && !var_names[j].empty()) return var_names[j];
    return "x" + std::to_string(j);
}

void LpProblem::validate() const {
    auto fail = [](const std::string& msg) { throw ProblemError(msg); };
    if (n_vars < 0) fail("negative variable count");
    const auto n = static_cast<std::size_t>(n_vars);
    if (objective.size() != n || lower.size() != n || upper.size() != n)
        fail("objective/bound vectors do not match n_vars");
    if (!var_names.empty() && var_names.size() != n) fail("var_names size does not match n_vars");
    if (!std::isfinite(objective_offset)) fail("non-finite objective offset");
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(objective[j])) fail("non-finite objective coefficient for " + var_name(static_cast<int>(j)));
        if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInf || upper[j] == -kInf)
            fail("invalid bound for " + var_name(static_cast<int>(j)));
        if (lower[j] > upper[j]) {
            std::ostringstream os;
            os << "lower bound " << lower[j] << " exceeds upper bound " << upper[j] << " for "
               << var_name(static_cast<int>(j));
            fail(os.str());
        }
    }
    for (std::size_t r = 0; r < constraints.size(); ++r) {
        const auto& c = constraints[r];
        if (!std::isfinite(c.rhs)) fail("non-finite rhs in row " + std::to_string(r));
        for (const Term& t : c.terms) {
            if (t.var < 0 || t.var >= n_vars)
                fail("row " + std::to_string(r) + " references variable " + std::to_string(t.var) +
                     " outside [0, " + std::to_string(n_vars) + ")");
            if (!std::isfinite(t.coef)) fail("non-finite coefficient in row " + std::to_string(r));
        }
    }
}

double LpProblem::evaluate(std::span<const double> x) const {
    double v = objective_offset;
    for (int j = 0; j < n_vars; ++j) v += objective[j] * x[j];
    return v;
}

double LpProblem::max_violation(std::span<const double> x) const {
    double worst = 0.0;
    for (int j = 0; j < n_vars; ++j) {
        worst = std::max(worst, lower[j] - x[j]);
        worst = std::max(worst, x[j] - upper[j]);
    }
    for (const auto& c : constraints) {
        double act = 0.0;
        for (const Term& t : c.terms) act += t.coef * x[t.var];
        switch (c.rel) {
            case Relation::LessEqual: worst = std::max(worst, act - c.rhs); break;
            case Relation::GreaterEqual: worst = std::max(worst, c.rhs - act); break;
            case Relation::Equal: worst = std::max(worst, std::abs(act - c.rhs)); break;
        }
    }
    return worst;
}

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration_limit";
        case LpStatus::TimeLimit: return "time_limit";
        case LpStatus::NumericalError: return "numerical_error";
    }
    return "unknown";
}

}  // namespace tcsc::lp
