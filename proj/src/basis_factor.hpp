#pragma once

// Sparse LU factorization of a simplex basis with product-form eta updates.

#include <span>
#include <vector>

namespace tcsc::lp::detail {

/// Column-compressed sparse matrix.
struct CscMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<int> start;  // size n_cols + 1
    std::vector<int> index;
    std::vector<double> value;
};

class BasisFactor {
public:
    /// Factorizes B whose k-th column is column basic[k] of [A I]
    /// (indices >= A.n_cols denote unit columns e_{j - n_cols}).
    /// Returns false when B is numerically singular; singular_positions()
    /// then lists the basis positions that could not be pivoted and
    /// spare_rows() the rows left without a pivot (same length).
    bool factorize(const CscMatrix& a, std::span<const int> basic);

    /// In: right-hand side indexed by row. Out: solution indexed by basis position.
    void ftran(std::vector<double>& x) const;
    /// In: vector indexed by basis position. Out: solution indexed by row.
    void btran(std::vector<double>& y) const;

    /// Replaces the column at basis position `pos`; alpha is B^{-1} a_entering.
    void update(int pos, const std::vector<double>& alpha);

    int num_updates() const { return static_cast<int>(etas_.size()); }
    std::size_t eta_nnz() const { return eta_nnz_; }
    std::size_t factor_nnz() const { return factor_nnz_; }

    const std::vector<int>& singular_positions() const { return singular_pos_; }
    const std::vector<int>& spare_rows() const { return spare_rows_; }

private:
    struct Entry {
        int idx;
        double val;
    };
    struct Pivot {
        int row;
        int pos;
        double value;
        int l_begin, l_end;  // multipliers in l_entries_
        int u_begin, u_end;  // off-diagonal U entries (positions) in u_entries_
    };
    struct Eta {
        int pos;
        double pivot;
        int begin, end;  // entries in eta_entries_
    };

    int m_ = 0;
    std::vector<Pivot> pivots_;
    std::vector<Entry> l_entries_;
    std::vector<Entry> u_entries_;
    std::vector<Eta> etas_;
    std::vector<Entry> eta_entries_;
    std::size_t eta_nnz_ = 0;
    std::size_t factor_nnz_ = 0;
    std::vector<int> singular_pos_;
    std::vector<int> spare_rows_;
    mutable std::vector<double> work_;
};

}  // namespace tcsc::lp::detail
