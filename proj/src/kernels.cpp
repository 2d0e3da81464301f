#include "eagle/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace eagle::kernels {

namespace {

void check_spmm(const SparseCsr& a, const Matrix& b) {
  require_dims(a.cols() == b.rows(), "spmm: inner dimensions differ (" + std::to_string(a.cols()) +
                                         " vs " + std::to_string(b.rows()) + ")");
}

// One row of a sparse-dense product. Shared by both paths so their
// accumulation order is identical.
inline void spmm_row(const SparseCsr& a, const Matrix& b, Index r, Matrix& out) {
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& vv = a.values();
  for (Index p = rp[r]; p < rp[r + 1]; ++p) out.row(r).noalias() += vv[p] * b.row(ci[p]);
}

// Static contiguous chunk [begin, end) for thread `tid` of `nt`.
inline std::pair<Index, Index> chunk(Index n, int tid, int nt) {
  const Index base = n / nt;
  const Index extra = n % nt;
  const Index begin = tid * base + std::min<Index>(tid, extra);
  return {begin, begin + base + (tid < extra ? 1 : 0)};
}

}  // namespace

int num_threads() { return omp_get_max_threads(); }

Matrix spmm(const SparseCsr& a, const Matrix& b) {
  check_spmm(a, b);
  Matrix out = Matrix::Zero(a.rows(), b.cols());
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < a.rows(); ++r) spmm_row(a, b, r, out);
  return out;
}

Matrix gemm(const Matrix& a, const Matrix& b) {
  require_dims(a.cols() == b.rows(), "gemm: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
#pragma omp parallel
  {
    const auto [begin, end] = chunk(a.rows(), omp_get_thread_num(), omp_get_num_threads());
    if (end > begin) out.middleRows(begin, end - begin).noalias() = a.middleRows(begin, end - begin) * b;
  }
  return out;
}

Matrix gemm_tn(const Matrix& a, const Matrix& b) {
  require_dims(a.rows() == b.rows(), "gemm_tn: row counts differ");
  Matrix out(a.cols(), b.cols());
#pragma omp parallel
  {
    const auto [begin, end] = chunk(b.cols(), omp_get_thread_num(), omp_get_num_threads());
    if (end > begin)
      out.middleCols(begin, end - begin).noalias() = a.transpose() * b.middleCols(begin, end - begin);
  }
  return out;
}

Matrix lowrank_apply(const Matrix& q, const Matrix& h, double scale) {
  require_dims(q.rows() == h.rows(), "lowrank_apply: Q and H row counts differ");
  Matrix small = gemm_tn(q, h);
  small *= scale;
  return gemm(q, small);
}

Matrix relu(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < x.rows(); ++r) out.row(r) = x.row(r).cwiseMax(0.0);
  return out;
}

Matrix sigmoid(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < x.rows(); ++r)
    for (Index c = 0; c < x.cols(); ++c) out(r, c) = 1.0 / (1.0 + std::exp(-x(r, c)));
  return out;
}

namespace serial {

Matrix spmm(const SparseCsr& a, const Matrix& b) {
  check_spmm(a, b);
  Matrix out = Matrix::Zero(a.rows(), b.cols());
  for (Index r = 0; r < a.rows(); ++r) spmm_row(a, b, r, out);
  return out;
}

Matrix gemm(const Matrix& a, const Matrix& b) {
  require_dims(a.cols() == b.rows(), "gemm: inner dimensions differ");
  Matrix out = a * b;
  return out;
}

Matrix gemm_tn(const Matrix& a, const Matrix& b) {
  require_dims(a.rows() == b.rows(), "gemm_tn: row counts differ");
  Matrix out = a.transpose() * b;
  return out;
}

Matrix lowrank_apply(const Matrix& q, const Matrix& h, double scale) {
  require_dims(q.rows() == h.rows(), "lowrank_apply: Q and H row counts differ");
  Matrix small = gemm_tn(q, h);
  small *= scale;
  return gemm(q, small);
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix sigmoid(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (Index r = 0; r < x.rows(); ++r)
    for (Index c = 0; c < x.cols(); ++c) out(r, c) = 1.0 / (1.0 + std::exp(-x(r, c)));
  return out;
}

}  // namespace serial

}  // namespace eagle::kernels
