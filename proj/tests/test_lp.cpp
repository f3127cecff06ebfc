#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "basis_factor.hpp"
#include "doctest.h"
#include "tcsc/lp.hpp"

using namespace tcsc::lp;

namespace {

// Dense Gaussian elimination with partial pivoting; false when singular.
bool dense_solve(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
    const int n = static_cast<int>(b.size());
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (std::abs(a[p][c]) < 1e-10) return false;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return true;
}

// Minimum over all vertices of a bounded LP (every variable boxed).
// Returns +inf when no vertex is feasible.
double vertex_enumeration(const LpProblem& p) {
    const int n = p.n_vars;
    struct Plane {
        std::vector<double> a;
        double b;
    };
    std::vector<Plane> planes;
    for (const auto& c : p.constraints) {
        Plane pl{std::vector<double>(n, 0.0), c.rhs};
        for (const Term& t : c.terms) pl.a[t.var] += t.coef;
        planes.push_back(pl);
    }
    for (int j = 0; j < n; ++j) {
        Plane lo{std::vector<double>(n, 0.0), p.lower[j]};
        lo.a[j] = 1.0;
        planes.push_back(lo);
        Plane hi = lo;
        hi.b = p.upper[j];
        planes.push_back(hi);
    }
    const int k = static_cast<int>(planes.size());
    double best = kInf;
    std::vector<int> pick(n);
    std::vector<char> mask(k, 0);
    std::fill(mask.begin(), mask.begin() + n, 1);
    do {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (int i = 0; i < k; ++i)
            if (mask[i]) {
                a.push_back(planes[i].a);
                b.push_back(planes[i].b);
            }
        std::vector<double> x;
        if (!dense_solve(a, b, x)) continue;
        if (p.max_violation(x) > 1e-9) continue;
        best = std::min(best, p.evaluate(x));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return best;
}

LpProblem random_boxed_lp(std::mt19937_64& rng, int n, int m) {
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_int_distribution<int> rel(0, 2);
    std::bernoulli_distribution sparse(0.7);
    LpProblem p;
    std::vector<double> anchor(n);
    for (int j = 0; j < n; ++j) {
        const double lo = std::round(coef(rng));
        const double hi = lo + 1.0 + std::round(std::abs(coef(rng)));
        p.add_var(lo, hi, std::round(coef(rng)));
        anchor[j] = lo + (hi - lo) * 0.5;
    }
    for (int r = 0; r < m; ++r) {
        std::vector<Term> terms;
        double act = 0.0;
        for (int j = 0; j < n; ++j) {
            if (!sparse(rng)) continue;
            const double c = std::round(coef(rng));
            if (c == 0.0) continue;
            terms.push_back({j, c});
            act += c * anchor[j];
        }
        const int kind = rel(rng);
        // Half of the rows pass through the anchor so many instances are feasible.
        const double shift = std::round(coef(rng));
        if (kind == 0) p.add_constraint(terms, Relation::LessEqual, std::round(act) + shift);
        else if (kind == 1) p.add_constraint(terms, Relation::GreaterEqual, std::round(act) - shift);
        else p.add_constraint(terms, Relation::Equal, act);
    }
    return p;
}

double dual_objective(const LpProblem& p, const LpSolution& s) {
    double v = p.objective_offset;
    for (int r = 0; r < p.n_rows(); ++r) v += s.row_duals[r] * p.constraints[r].rhs;
    for (int j = 0; j < p.n_vars; ++j) {
        const double d = s.reduced_costs[j];
        if (d > 0) v += d * p.lower[j];
        else if (d < 0) v += d * p.upper[j];
    }
    return v;
}

void check_dual_signs(const LpProblem& p, const LpSolution& s) {
    for (int r = 0; r < p.n_rows(); ++r) {
        const auto rel = p.constraints[r].rel;
        if (rel == Relation::LessEqual) CHECK(s.row_duals[r] <= 1e-7);
        if (rel == Relation::GreaterEqual) CHECK(s.row_duals[r] >= -1e-7);
    }
    for (int j = 0; j < p.n_vars; ++j) {
        const double d = s.reduced_costs[j];
        if (d > 1e-7) CHECK(std::abs(s.x[j] - p.lower[j]) < 1e-6);
        if (d < -1e-7) CHECK(std::abs(s.x[j] - p.upper[j]) < 1e-6);
    }
}

}  // namespace

TEST_CASE("single active bound") {
    LpProblem p;
    const int x = p.add_var(0.0, 10.0, 1.0);
    p.add_constraint({{x, 1.0}}, Relation::GreaterEqual, 3.0);
    const auto s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("simplex corner") {
    LpProblem p;
    const int x = p.add_var(0.0, 1.0, -1.0);
    const int y = p.add_var(0.0, 1.0, -1.0);
    p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::LessEqual, 1.0);
    const auto s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(std::abs(s.objective + 1.0) < 1e-7);
    CHECK(std::abs(vertex_enumeration(p) + 1.0) < 1e-9);
}

TEST_CASE("contradictory rows are infeasible") {
    LpProblem p;
    const int x = p.add_var(-kInf, kInf, 0.0);
    p.add_constraint({{x, 1.0}}, Relation::GreaterEqual, 2.0);
    p.add_constraint({{x, 1.0}}, Relation::LessEqual, 1.0);
    CHECK(solve_lp(p).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded ray detected") {
    LpProblem p;
    const int x = p.add_var(0.0, kInf, -1.0);
    const int y = p.add_var(0.0, kInf, 0.0);
    p.add_constraint({{x, 1.0}, {y, -1.0}}, Relation::LessEqual, 1.0);
    CHECK(solve_lp(p).status == LpStatus::Unbounded);
}

TEST_CASE("free variables and equalities") {
    LpProblem p;
    const int x = p.add_var(-kInf, kInf, 1.0);
    const int y = p.add_var(-kInf, kInf, 2.0);
    p.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::Equal, 4.0);
    p.add_constraint({{x, 1.0}, {y, -1.0}}, Relation::LessEqual, 2.0);
    // x = 3, y = 1 -> 5
    const auto s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(5.0));
    CHECK(s.x[0] == doctest::Approx(3.0));
}

TEST_CASE("structural errors are reported before solving") {
    LpProblem p;
    p.add_var(1.0, 0.0);
    CHECK_THROWS_AS(solve_lp(p), ProblemError);
    LpProblem q;
    q.add_var(0.0, 1.0);
    q.add_constraint({{3, 1.0}}, Relation::LessEqual, 1.0);
    CHECK_THROWS_AS(solve_lp(q), ProblemError);
    LpProblem r;
    r.add_var(0.0, 1.0);
    r.add_constraint({{0, 1.0}}, Relation::LessEqual, std::nan(""));
    CHECK_THROWS_AS(solve_lp(r), ProblemError);
}

TEST_CASE("random boxed LPs match vertex enumeration and satisfy strong duality") {
    std::mt19937_64 rng(7);
    int optimal = 0, infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const int m = 1 + static_cast<int>(rng() % 4);
        const LpProblem p = random_boxed_lp(rng, n, m);
        const double oracle = vertex_enumeration(p);
        const auto s = solve_lp(p);
        CAPTURE(trial);
        if (!std::isfinite(oracle)) {
            CHECK(s.status == LpStatus::Infeasible);
            ++infeasible;
            continue;
        }
        REQUIRE(s.status == LpStatus::Optimal);
        ++optimal;
        CHECK(std::abs(s.objective - oracle) < 1e-7 * (1.0 + std::abs(oracle)));
        CHECK(p.max_violation(s.x) < 1e-7);
        CHECK(std::abs(dual_objective(p, s) - s.objective) < 1e-6 * (1.0 + std::abs(oracle)));
        check_dual_signs(p, s);
    }
    CHECK(optimal > 50);
    CHECK(infeasible > 5);
}

TEST_CASE("warm reoptimize after bound changes equals a cold solve") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 8);
        const int m = 2 + static_cast<int>(rng() % 8);
        LpProblem p = random_boxed_lp(rng, n, m);
        Simplex sx(p);
        const auto first = sx.solve_primal();
        if (first.status != LpStatus::Optimal) continue;
        for (int round = 0; round < 4; ++round) {
            const int j = static_cast<int>(rng() % n);
            const double mid = std::floor(first.x[j]);
            if (rng() % 2) p.upper[j] = std::max(p.lower[j], mid);
            else p.lower[j] = std::min(p.upper[j], mid + 1.0);
            sx.set_var_bounds(j, p.lower[j], p.upper[j]);
            const auto warm = sx.reoptimize();
            const auto cold = solve_lp(p);
            CAPTURE(trial);
            CAPTURE(round);
            REQUIRE(warm.status == cold.status);
            if (cold.status == LpStatus::Optimal) {
                CHECK(std::abs(warm.objective - cold.objective) < 1e-7 * (1.0 + std::abs(cold.objective)));
                CHECK(p.max_violation(warm.x) < 1e-7);
                ++checked;
            } else {
                break;
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("objective change warm start") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        LpProblem p = random_boxed_lp(rng, 6, 5);
        Simplex sx(p);
        if (sx.solve_primal().status != LpStatus::Optimal) continue;
        for (auto& c : p.objective) c = static_cast<double>(static_cast<int>(rng() % 11) - 5);
        sx.set_objective(p.objective);
        const auto warm = sx.solve_primal();
        const auto cold = solve_lp(p);
        REQUIRE(warm.status == LpStatus::Optimal);
        CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-9));
    }
}

TEST_CASE("larger sparse LP with duality check") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Transportation problem: supplies s_i, demands d_k, costs c_ik.
    const int ns = 15, nd = 25;
    LpProblem p;
    std::vector<std::vector<int>> v(ns, std::vector<int>(nd));
    for (int i = 0; i < ns; ++i)
        for (int k = 0; k < nd; ++k) v[i][k] = p.add_var(0.0, kInf, 1.0 + 9.0 * u(rng));
    double total = 0.0;
    for (int k = 0; k < nd; ++k) {
        std::vector<Term> t;
        for (int i = 0; i < ns; ++i) t.push_back({v[i][k], 1.0});
        const double d = 1.0 + std::floor(10.0 * u(rng));
        total += d;
        p.add_constraint(t, Relation::GreaterEqual, d);
    }
    for (int i = 0; i < ns; ++i) {
        std::vector<Term> t;
        for (int k = 0; k < nd; ++k) t.push_back({v[i][k], 1.0});
        p.add_constraint(t, Relation::LessEqual, std::ceil(total / ns) + 2.0);
    }
    const auto s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(p.max_violation(s.x) < 1e-7);
    CHECK(std::abs(dual_objective(p, s) - s.objective) < 1e-6 * (1.0 + std::abs(s.objective)));
    check_dual_signs(p, s);
}

TEST_CASE("basis factor solves against dense products") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 30);
        const int ncol = m;
        tcsc::lp::detail::CscMatrix a;
        a.n_rows = m;
        a.n_cols = ncol;
        a.start.push_back(0);
        std::vector<std::vector<double>> dense(m, std::vector<double>(m, 0.0));
        for (int j = 0; j < ncol; ++j) {
            for (int i = 0; i < m; ++i) {
                if (i == j || rng() % 4 == 0) {
                    const double v = i == j ? 2.0 + u(rng) : u(rng);
                    a.index.push_back(i);
                    a.value.push_back(v);
                    dense[i][j] = v;
                }
            }
            a.start.push_back(static_cast<int>(a.index.size()));
        }
        std::vector<int> basic(m);
        for (int k = 0; k < m; ++k) basic[k] = k % 3 == 0 ? ncol + k : k;  // mix logicals
        std::vector<std::vector<double>> b(m, std::vector<double>(m, 0.0));
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i) b[i][k] = basic[k] >= ncol ? (i == basic[k] - ncol ? 1.0 : 0.0) : dense[i][basic[k]];

        tcsc::lp::detail::BasisFactor f;
        REQUIRE(f.factorize(a, basic));
        std::vector<double> rhs(m), x;
        for (auto& v : rhs) v = u(rng);
        x = rhs;
        f.ftran(x);
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += b[i][k] * x[k];
            CHECK(std::abs(s - rhs[i]) < 1e-9);
        }
        std::vector<double> y = rhs;
        f.btran(y);
        for (int k = 0; k < m; ++k) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += b[i][k] * y[i];
            CHECK(std::abs(s - rhs[k]) < 1e-9);
        }
        // Product-form update: replace position 0 by a fresh column.
        std::vector<double> col(m);
        for (auto& v : col) v = u(rng);
        col[0] += 3.0;
        std::vector<double> alpha = col;
        f.ftran(alpha);
        f.update(0, alpha);
        for (int i = 0; i < m; ++i) b[i][0] = col[i];
        x = rhs;
        f.ftran(x);
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += b[i][k] * x[k];
            CHECK(std::abs(s - rhs[i]) < 1e-8);
        }
        y = rhs;
        f.btran(y);
        for (int k = 0; k < m; ++k) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += b[i][k] * y[i];
            CHECK(std::abs(s - rhs[k]) < 1e-8);
        }
    }
}

TEST_CASE("LP text round trip") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        LpProblem p = random_boxed_lp(rng, 5, 4);
        p.objective_offset = 2.5;
        p.lower[1] = -kInf;
        for (int j = 0; j < p.n_vars; ++j) p.var_names.push_back("p_chg[" + std::to_string(j) + ",3]");
        std::vector<int> bins{0};
        p.lower[0] = 0.0;
        p.upper[0] = 1.0;
        std::stringstream ss;
        write_lp_format(ss, p, bins);
        std::vector<int> bins_back;
        const LpProblem q = read_lp_format(ss, &bins_back);
        REQUIRE(q.n_vars == p.n_vars);
        REQUIRE(q.n_rows() == p.n_rows());
        CHECK(bins_back == bins);
        CHECK(q.objective_offset == p.objective_offset);
        for (int j = 0; j < p.n_vars; ++j) {
            CHECK(q.objective[j] == p.objective[j]);
            CHECK(q.lower[j] == p.lower[j]);
            CHECK(q.upper[j] == p.upper[j]);
        }
        const auto a = solve_lp(p), b = solve_lp(q);
        CHECK(a.status == b.status);
        if (a.status == LpStatus::Optimal) CHECK(a.objective == doctest::Approx(b.objective));
    }
}
