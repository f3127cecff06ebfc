#include "basis_factor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace tcsc::lp::detail {

namespace {

constexpr double kDropTol = 1e-14;
constexpr double kAbsPivotTol = 1e-11;
constexpr double kThreshold = 0.01;  // relative pivot threshold
constexpr int kSearchLimit = 4;

// Doubly linked lists of items bucketed by their current count.
class CountBuckets {
public:
    explicit CountBuckets(int n) : head_(n + 2, -1), next_(n, -1), prev_(n, -1), bucket_(n, -1) {}

    void insert(int item, int count) {
        bucket_[item] = count;
        prev_[item] = -1;
        next_[item] = head_[count];
        if (head_[count] >= 0) prev_[head_[count]] = item;
        head_[count] = item;
    }
    void remove(int item) {
        const int b = bucket_[item];
        if (b < 0) return;
        if (prev_[item] >= 0) next_[prev_[item]] = next_[item];
        else head_[b] = next_[item];
        if (next_[item] >= 0) prev_[next_[item]] = prev_[item];
        bucket_[item] = -1;
    }
    void move(int item, int count) {
        remove(item);
        insert(item, count);
    }
    int head(int count) const { return head_[count]; }
    int next(int item) const { return next_[item]; }

private:
    std::vector<int> head_, next_, prev_, bucket_;
};

}  // namespace

bool BasisFactor::factorize(const CscMatrix& a, std::span<const int> basic) {
    m_ = a.n_rows;
    assert(static_cast<int>(basic.size()) == m_);
    pivots_.clear();
    l_entries_.clear();
    u_entries_.clear();
    etas_.clear();
    eta_entries_.clear();
    eta_nnz_ = 0;
    singular_pos_.clear();
    spare_rows_.clear();
    work_.assign(m_, 0.0);

    std::vector<std::vector<Entry>> rows(m_);
    std::vector<std::vector<int>> cols(m_);
    for (int k = 0; k < m_; ++k) {
        const int j = basic[k];
        if (j < a.n_cols) {
            for (int p = a.start[j]; p < a.start[j + 1]; ++p) {
                if (a.value[p] == 0.0) continue;
                rows[a.index[p]].push_back({k, a.value[p]});
                cols[k].push_back(a.index[p]);
            }
        } else {
            const int r = j - a.n_cols;
            rows[r].push_back({k, 1.0});
            cols[k].push_back(r);
        }
    }

    CountBuckets row_lists(m_), col_lists(m_);
    for (int i = 0; i < m_; ++i) row_lists.insert(i, static_cast<int>(rows[i].size()));
    for (int k = 0; k < m_; ++k) col_lists.insert(k, static_cast<int>(cols[k].size()));

    std::vector<char> row_done(m_, 0), col_done(m_, 0);
    std::vector<int> where(m_, -1);

    auto value_at = [&](int i, int k) {
        for (const Entry& e : rows[i])
            if (e.idx == k) return e.val;
        return 0.0;
    };
    auto col_max = [&](int k) {
        double mx = 0.0;
        for (int i : cols[k]) mx = std::max(mx, std::abs(value_at(i, k)));
        return mx;
    };
    auto erase_int = [](std::vector<int>& v, int x) {
        auto it = std::find(v.begin(), v.end(), x);
        if (it != v.end()) {
            *it = v.back();
            v.pop_back();
        }
    };

    for (int step = 0; step < m_; ++step) {
        int best_row = -1, best_col = -1;
        double best_val = 0.0;
        long best_cost = std::numeric_limits<long>::max();
        int examined = 0;

        auto consider = [&](int i, int k, double v, double cmax, long cost) {
            if (std::abs(v) < kAbsPivotTol || std::abs(v) < kThreshold * cmax) return;
            if (cost < best_cost || (cost == best_cost && std::abs(v) > std::abs(best_val))) {
                best_cost = cost;
                best_row = i;
                best_col = k;
                best_val = v;
            }
        };

        for (int c = 1; c <= m_ && best_cost > 0; ++c) {
            for (int k = col_lists.head(c); k >= 0; k = col_lists.next(k)) {
                const double cmax = col_max(k);
                for (int i : cols[k])
                    consider(i, k, value_at(i, k), cmax,
                             static_cast<long>(rows[i].size() - 1) * (c - 1));
                ++examined;
                if (best_row >= 0 && (best_cost <= static_cast<long>(c - 1) * (c - 1) ||
                                      examined >= kSearchLimit))
                    goto found;
            }
            for (int i = row_lists.head(c); i >= 0; i = row_lists.next(i)) {
                for (const Entry& e : rows[i])
                    consider(i, e.idx, e.val, col_max(e.idx),
                             static_cast<long>(c - 1) * (static_cast<long>(cols[e.idx].size()) - 1));
                ++examined;
                if (best_row >= 0 && (best_cost <= static_cast<long>(c - 1) * c ||
                                      examined >= kSearchLimit))
                    goto found;
            }
            if (best_row >= 0 && best_cost <= static_cast<long>(c) * c) goto found;
        }
    found:
        if (best_row < 0) break;

        const int p = best_row, q = best_col;
        Pivot piv{p, q, best_val, static_cast<int>(l_entries_.size()), 0,
                  static_cast<int>(u_entries_.size()), 0};
        for (const Entry& e : rows[p])
            if (e.idx != q) u_entries_.push_back(e);
        piv.u_end = static_cast<int>(u_entries_.size());

        // Row p leaves the active submatrix.
        for (const Entry& e : rows[p]) erase_int(cols[e.idx], p);
        row_lists.remove(p);
        row_done[p] = 1;
        col_lists.remove(q);
        col_done[q] = 1;

        const std::vector<int> targets = cols[q];
        cols[q].clear();
        for (int i : targets) {
            auto& row = rows[i];
            double aiq = 0.0;
            for (std::size_t t = 0; t < row.size(); ++t) {
                if (row[t].idx == q) {
                    aiq = row[t].val;
                    row[t] = row.back();
                    row.pop_back();
                    break;
                }
            }
            const double l = aiq / best_val;
            if (l == 0.0) continue;
            l_entries_.push_back({i, l});
            for (std::size_t t = 0; t < row.size(); ++t) where[row[t].idx] = static_cast<int>(t);
            for (int u = piv.u_begin; u < piv.u_end; ++u) {
                const Entry& e = u_entries_[u];
                const int w = where[e.idx];
                if (w >= 0) {
                    row[w].val -= l * e.val;
                } else {
                    where[e.idx] = static_cast<int>(row.size());
                    row.push_back({e.idx, -l * e.val});
                    cols[e.idx].push_back(i);
                }
            }
            for (const Entry& e : row) where[e.idx] = -1;
            std::size_t keep = 0;
            for (std::size_t t = 0; t < row.size(); ++t) {
                if (std::abs(row[t].val) <= kDropTol) {
                    erase_int(cols[row[t].idx], i);
                } else {
                    row[keep++] = row[t];
                }
            }
            row.resize(keep);
            row_lists.move(i, static_cast<int>(row.size()));
        }
        piv.l_end = static_cast<int>(l_entries_.size());
        for (int u = piv.u_begin; u < piv.u_end; ++u) {
            const int k = u_entries_[u].idx;
            col_lists.move(k, static_cast<int>(cols[k].size()));
        }
        pivots_.push_back(piv);
    }

    factor_nnz_ = l_entries_.size() + u_entries_.size() + pivots_.size();
    if (static_cast<int>(pivots_.size()) == m_) return true;

    for (int k = 0; k < m_; ++k)
        if (!col_done[k]) singular_pos_.push_back(k);
    for (int i = 0; i < m_; ++i)
        if (!row_done[i]) spare_rows_.push_back(i);
    return false;
}

void BasisFactor::ftran(std::vector<double>& x) const {
    for (const Pivot& pv : pivots_) {
        const double xp = x[pv.row];
        if (xp == 0.0) continue;
        for (int t = pv.l_begin; t < pv.l_end; ++t) x[l_entries_[t].idx] -= l_entries_[t].val * xp;
    }
    std::vector<double>& out = work_;
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
        double v = x[it->row];
        for (int t = it->u_begin; t < it->u_end; ++t) v -= u_entries_[t].val * out[u_entries_[t].idx];
        out[it->pos] = v / it->value;
    }
    for (const Eta& eta : etas_) {
        const double xr = out[eta.pos] / eta.pivot;
        out[eta.pos] = xr;
        if (xr == 0.0) continue;
        for (int t = eta.begin; t < eta.end; ++t) out[eta_entries_[t].idx] -= eta_entries_[t].val * xr;
    }
    x.swap(out);
}

void BasisFactor::btran(std::vector<double>& y) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double s = y[it->pos];
        for (int t = it->begin; t < it->end; ++t) s -= eta_entries_[t].val * y[eta_entries_[t].idx];
        y[it->pos] = s / it->pivot;
    }
    std::vector<double>& z = work_;
    for (const Pivot& pv : pivots_) {
        const double w = y[pv.pos] / pv.value;
        z[pv.row] = w;
        if (w == 0.0) continue;
        for (int t = pv.u_begin; t < pv.u_end; ++t) y[u_entries_[t].idx] -= u_entries_[t].val * w;
    }
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
        double s = z[it->row];
        for (int t = it->l_begin; t < it->l_end; ++t) s -= l_entries_[t].val * z[l_entries_[t].idx];
        z[it->row] = s;
    }
    y.swap(z);
}

void BasisFactor::update(int pos, const std::vector<double>& alpha) {
    Eta eta{pos, alpha[pos], static_cast<int>(eta_entries_.size()), 0};
    for (int i = 0; i < m_; ++i) {
        if (i == pos) continue;
        if (std::abs(alpha[i]) > 1e-13) eta_entries_.push_back({i, alpha[i]});
    }
    eta.end = static_cast<int>(eta_entries_.size());
    eta_nnz_ += static_cast<std::size_t>(eta.end - eta.begin);
    etas_.push_back(eta);
}

}  // namespace tcsc::lp::detail
