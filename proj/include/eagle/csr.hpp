#pragma once

#include <vector>

#include "eagle/common.hpp"

namespace eagle {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row; duplicate triplets are summed on construction.
class SparseCsr {
 public:
  SparseCsr() = default;
  SparseCsr(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
            std::vector<double> values);

  static SparseCsr from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
  static SparseCsr identity(Index n);
  static SparseCsr from_dense(const Matrix& dense, double drop_tol = 0.0);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  SparseCsr transpose() const;
  Matrix to_dense() const;

  /// Column sums (length cols()).
  Vector col_sums() const;
  Vector row_sums() const;

  /// Throws InputError if any structural invariant is broken.
  void validate() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

/// Horizontal concatenation [a | b]; row counts must agree.
SparseCsr hstack(const SparseCsr& a, const SparseCsr& b);

/// Scales every stored value by `factor`.
SparseCsr scaled(const SparseCsr& a, double factor);

}  // namespace eagle
