#include "eagle/csr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eagle {

SparseCsr::SparseCsr(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
                     std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  validate();
}

SparseCsr SparseCsr::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      std::ostringstream msg;
      msg << "triplet (" << t.row << ", " << t.col << ") outside " << rows << "x" << cols;
      throw DimensionError(msg.str());
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<Index> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    if (!col_idx.empty() && i > 0 && triplets[i - 1].row == t.row && triplets[i - 1].col == t.col) {
      values.back() += t.value;
      continue;
    }
    col_idx.push_back(t.col);
    values.push_back(t.value);
    ++row_ptr[static_cast<std::size_t>(t.row) + 1];
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  return SparseCsr(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseCsr SparseCsr::identity(Index n) {
  std::vector<Index> row_ptr(static_cast<std::size_t>(n) + 1);
  std::vector<Index> col_idx(static_cast<std::size_t>(n));
  std::iota(row_ptr.begin(), row_ptr.end(), Index{0});
  std::iota(col_idx.begin(), col_idx.end(), Index{0});
  return SparseCsr(n, n, std::move(row_ptr), std::move(col_idx),
                   std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

SparseCsr SparseCsr::from_dense(const Matrix& dense, double drop_tol) {
  std::vector<Triplet> trips;
  for (Index i = 0; i < dense.rows(); ++i)
    for (Index j = 0; j < dense.cols(); ++j)
      if (std::abs(dense(i, j)) > drop_tol) trips.push_back({i, j, dense(i, j)});
  return from_triplets(dense.rows(), dense.cols(), std::move(trips));
}

SparseCsr SparseCsr::transpose() const {
  std::vector<Index> row_ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (Index c : col_idx_) ++row_ptr[static_cast<std::size_t>(c) + 1];
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());

  std::vector<Index> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<Index> col_idx(col_idx_.size());
  std::vector<double> values(values_.size());
  // Rows are visited in ascending order, so each transposed row comes out sorted.
  for (Index r = 0; r < rows_; ++r) {
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const Index dst = next[static_cast<std::size_t>(col_idx_[p])]++;
      col_idx[dst] = r;
      values[dst] = values_[p];
    }
  }
  return SparseCsr(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

Matrix SparseCsr::to_dense() const {
  Matrix out = Matrix::Zero(rows_, cols_);
  for (Index r = 0; r < rows_; ++r)
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) out(r, col_idx_[p]) = values_[p];
  return out;
}

Vector SparseCsr::col_sums() const {
  Vector out = Vector::Zero(cols_);
  for (std::size_t p = 0; p < values_.size(); ++p) out(col_idx_[p]) += values_[p];
  return out;
}

Vector SparseCsr::row_sums() const {
  Vector out = Vector::Zero(rows_);
  for (Index r = 0; r < rows_; ++r)
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) out(r) += values_[p];
  return out;
}

void SparseCsr::validate() const {
  auto fail = [](const std::string& m) { throw InputError("invalid CSR: " + m); };
  if (rows_ < 0 || cols_ < 0) fail("negative shape");
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1) fail("row_ptr length != rows + 1");
  if (row_ptr_.front() != 0) fail("row_ptr[0] != 0");
  if (static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size()) fail("row_ptr[rows] != nnz");
  if (col_idx_.size() != values_.size()) fail("col_idx and values differ in length");
  for (Index r = 0; r < rows_; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r]) fail("row_ptr decreases at row " + std::to_string(r));
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      if (col_idx_[p] < 0 || col_idx_[p] >= cols_) fail("column out of bounds in row " + std::to_string(r));
      if (p > row_ptr_[r] && col_idx_[p] <= col_idx_[p - 1])
        fail("columns not strictly increasing in row " + std::to_string(r));
      if (!std::isfinite(values_[p])) fail("non-finite value in row " + std::to_string(r));
    }
  }
}

SparseCsr hstack(const SparseCsr& a, const SparseCsr& b) {
  require_dims(a.rows() == b.rows(), "hstack: row counts differ");
  std::vector<Index> row_ptr(static_cast<std::size_t>(a.rows()) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(static_cast<std::size_t>(a.nnz() + b.nnz()));
  values.reserve(col_idx.capacity());
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p) {
      col_idx.push_back(a.col_idx()[p]);
      values.push_back(a.values()[p]);
    }
    for (Index p = b.row_ptr()[r]; p < b.row_ptr()[r + 1]; ++p) {
      col_idx.push_back(a.cols() + b.col_idx()[p]);
      values.push_back(b.values()[p]);
    }
    row_ptr[static_cast<std::size_t>(r) + 1] = static_cast<Index>(col_idx.size());
  }
  return SparseCsr(a.rows(), a.cols() + b.cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseCsr scaled(const SparseCsr& a, double factor) {
  std::vector<double> values = a.values();
  for (double& v : values) v *= factor;
  return SparseCsr(a.rows(), a.cols(), a.row_ptr(), a.col_idx(), std::move(values));
}

}  // namespace eagle
