#pragma once

// Brute-force reference solvers shared by unit and acceptance tests.

#include <cmath>
#include <random>

#include "tcsc/milp.hpp"

namespace oracle {

/// Minimum over all 2^k binary assignments of the LP with binaries fixed.
/// Returns +inf when every assignment is infeasible.
inline double enumerate_binaries(const tcsc::milp::MilpProblem& p) {
    const auto k = p.binaries.size();
    double best = tcsc::lp::kInf;
    for (unsigned long mask = 0; mask < (1UL << k); ++mask) {
        tcsc::lp::LpProblem q = p.lp;
        bool ok = true;
        for (std::size_t b = 0; b < k; ++b) {
            const double v = (mask >> b) & 1UL ? 1.0 : 0.0;
            const int j = p.binaries[b];
            if (v < q.lower[j] || v > q.upper[j]) ok = false;
            q.lower[j] = q.upper[j] = v;
        }
        if (!ok) continue;
        const auto s = tcsc::lp::solve_lp(q);
        if (s.status == tcsc::lp::LpStatus::Optimal) best = std::min(best, s.objective);
    }
    return best;
}

/// Random mixed-binary instance with n_vars <= 20 and n_bin <= min(12, n_vars);
/// continuous variables are boxed so every feasible instance is bounded.
inline tcsc::milp::MilpProblem random_milp(std::mt19937_64& rng, int n_vars, int n_bin, int n_rows) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    tcsc::milp::MilpProblem p;
    std::vector<double> anchor(n_vars);
    for (int j = 0; j < n_vars; ++j) {
        const bool bin = j < n_bin;
        const double lo = bin ? 0.0 : std::round(4.0 * u(rng));
        const double hi = bin ? 1.0 : lo + 1.0 + std::round(4.0 * std::abs(u(rng)));
        p.lp.add_var(lo, hi, std::round(10.0 * u(rng)) / 2.0);
        anchor[j] = bin ? static_cast<double>(rng() % 2) : 0.5 * (lo + hi);
        if (bin) p.binaries.push_back(j);
    }
    for (int r = 0; r < n_rows; ++r) {
        std::vector<tcsc::lp::Term> terms;
        double act = 0.0;
        for (int j = 0; j < n_vars; ++j) {
            if (rng() % 3 == 0) continue;
            const double c = std::round(6.0 * u(rng));
            if (c == 0.0) continue;
            terms.push_back({j, c});
            act += c * anchor[j];
        }
        const double slack = std::round(3.0 * u(rng));
        switch (rng() % 3) {
            case 0: p.lp.add_constraint(terms, tcsc::lp::Relation::LessEqual, std::round(act) + slack); break;
            case 1: p.lp.add_constraint(terms, tcsc::lp::Relation::GreaterEqual, std::round(act) - slack); break;
            default: p.lp.add_constraint(terms, tcsc::lp::Relation::Equal, act); break;
        }
    }
    return p;
}

}  // namespace oracle
