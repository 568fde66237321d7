#pragma once

#include <algorithm>
#include <tuple>
#include <vector>

#include "hyperinv/matrix.hpp"

namespace hyperinv {

/// Compressed sparse rows. Column indices are 0-based, strictly ascending
/// within each row, no duplicates.
template <class T>
class SparseMatrix {
  public:
    using value_type = T;

    SparseMatrix() = default;
    SparseMatrix(int rows, int cols, std::vector<int> row_offsets,
                 std::vector<int> col_indices, std::vector<T> values)
        : rows_(rows),
          cols_(cols),
          row_offsets_(std::move(row_offsets)),
          col_indices_(std::move(col_indices)),
          values_(std::move(values)) {
        validate();
    }

    /// Builds from (row, col, value) triplets; duplicates are rejected.
    static SparseMatrix from_triplets(int rows, int cols,
                                      std::vector<std::tuple<int, int, T>> triplets) {
        std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<0>(a), std::get<1>(a)) <
                   std::tie(std::get<0>(b), std::get<1>(b));
        });
        SparseMatrix out;
        out.rows_ = rows;
        out.cols_ = cols;
        out.row_offsets_.assign(rows + 1, 0);
        out.col_indices_.reserve(triplets.size());
        out.values_.reserve(triplets.size());
        int prev_r = -1, prev_c = -1;
        for (const auto& [r, c, v] : triplets) {
            if (r < 0 || r >= rows || c < 0 || c >= cols)
                throw shape_error("sparse triplet out of range");
            if (r == prev_r && c == prev_c)
                throw config_error("duplicate sparse entry at (" + std::to_string(r) + "," +
                                   std::to_string(c) + ")");
            out.row_offsets_[r + 1]++;
            out.col_indices_.push_back(c);
            out.values_.push_back(v);
            prev_r = r;
            prev_c = c;
        }
        for (int i = 0; i < rows; ++i) out.row_offsets_[i + 1] += out.row_offsets_[i];
        return out;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long long nnz() const { return static_cast<long long>(values_.size()); }
    const std::vector<int>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& col_indices() const { return col_indices_; }
    const std::vector<T>& values() const { return values_; }

  private:
    void validate() const {
        if (rows_ <= 0 || cols_ <= 0) throw shape_error("sparse dimensions must be positive");
        if (static_cast<int>(row_offsets_.size()) != rows_ + 1)
            throw shape_error("row offset array has wrong length");
        if (row_offsets_.front() != 0 ||
            row_offsets_.back() != static_cast<int>(values_.size()) ||
            col_indices_.size() != values_.size())
            throw shape_error("inconsistent CSR arrays");
        for (int i = 0; i < rows_; ++i) {
            if (row_offsets_[i] > row_offsets_[i + 1])
                throw shape_error("row offsets not monotone");
            for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
                if (col_indices_[k] < 0 || col_indices_[k] >= cols_)
                    throw shape_error("column index out of range");
                if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])
                    throw shape_error("column indices not strictly ascending within a row");
            }
        }
    }

    int rows_ = 0, cols_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> col_indices_;
    std::vector<T> values_;
};

template <class T>
std::vector<T> spmv(const SparseMatrix<T>& a, const std::vector<T>& v) {
    if (static_cast<int>(v.size()) != a.cols()) throw shape_error("spmv: length mismatch");
    std::vector<T> out(a.rows(), T(0));
    const auto& off = a.row_offsets();
    const auto& col = a.col_indices();
    const auto& val = a.values();
    for (int i = 0; i < a.rows(); ++i) {
        T s(0);
        for (int k = off[i]; k < off[i + 1]; ++k) s += val[k] * v[col[k]];
        out[i] = s;
    }
    return out;
}

/// Drops entries with modulus <= threshold, copies the rest exactly.
template <class T>
SparseMatrix<T> sparsify(const DenseMatrix<T>& x, real_t<T> threshold = real_t<T>(1e-5)) {
    std::vector<int> offsets(x.rows() + 1, 0);
    std::vector<int> cols;
    std::vector<T> vals;
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j) {
            if (scalar_abs(x(i, j)) > threshold) {
                cols.push_back(j);
                vals.push_back(x(i, j));
                offsets[i + 1]++;
            }
        }
    }
    for (int i = 0; i < x.rows(); ++i) offsets[i + 1] += offsets[i];
    return SparseMatrix<T>(x.rows(), x.cols(), std::move(offsets), std::move(cols),
                           std::move(vals));
}

template <class T>
DenseMatrix<T> densify(const SparseMatrix<T>& a) {
    DenseMatrix<T> out(a.rows(), a.cols());
    const auto& off = a.row_offsets();
    for (int i = 0; i < a.rows(); ++i)
        for (int k = off[i]; k < off[i + 1]; ++k) out(i, a.col_indices()[k]) = a.values()[k];
    return out;
}

}  // namespace hyperinv
