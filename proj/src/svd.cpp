#include "eagle/svd.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eagle/kernels.hpp"

namespace eagle {

namespace {

// Orthonormal basis for range(y) with exactly `cols` columns (cols >= y.cols()
// allowed): Householder Q restricted to its leading columns.
Matrix orthonormalize(const Matrix& y, Index cols) {
  Eigen::HouseholderQR<Matrix> qr(y);
  Matrix q = qr.householderQ() * Matrix::Identity(y.rows(), cols);
  return q;
}

// Box-Muller on raw 53-bit draws; std::normal_distribution differs across
// standard libraries.
Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); i += 2) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * M_PI * uniform();
    m.data()[i] = r * std::cos(t);
    if (i + 1 < m.size()) m.data()[i + 1] = r * std::sin(t);
  }
  return m;
}

}  // namespace

void canonicalize_signs(Matrix& u) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < u.rows(); ++i) {
      // Strict comparison: the first of equal-magnitude entries wins.
      if (std::abs(u(i, j)) > best + 1e-14) {
        best = std::abs(u(i, j));
        arg = i;
      }
    }
    if (u(arg, j) < 0.0) u.col(j) *= -1.0;
  }
}

SvdFactors truncated_svd(const SparseCsr& a, Index k, const SvdOptions& opts) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (k < 1 || k > m)
    throw InputError("truncated_svd: k = " + std::to_string(k) + " outside [1, " + std::to_string(m) + "]");
  if (opts.oversample < 0 || opts.power_iters < 0) throw InputError("truncated_svd: negative oversample/power_iters");
  if (n == 0 || a.nnz() == 0) throw InputError("truncated_svd: matrix has no nonzeros");

  const SparseCsr at = a.transpose();
  const Index sketch = std::min(k + opts.oversample, m);
  // The range of `a` has dimension <= n; sample at most n directions and let
  // orthonormalize() complete the basis when sketch > n. Once the sketch
  // covers half the columns, sampling all n costs at most twice as much and
  // captures the range exactly, where a flat spectrum near the cutoff would
  // otherwise converge slowly under power iteration.
  const Index probes = std::min(2 * sketch >= n ? n : sketch, m);
  const Index width = std::max(sketch, probes);

  Matrix q = orthonormalize(kernels::spmm(a, gaussian(n, probes, opts.seed)), probes);
  // With every column sampled the range is already exact.
  const Index iters = probes == n ? 0 : opts.power_iters;
  for (Index it = 0; it < iters; ++it) {
    const Matrix z = orthonormalize(kernels::spmm(at, q), std::min(probes, n));
    q = orthonormalize(kernels::spmm(a, z), probes);
  }
  q = orthonormalize(q, width);

  // Small (width x n) projection B = Q^T A, computed as (A^T Q)^T.
  const Matrix b = kernels::spmm(at, q).transpose();
  // Jacobi rather than divide-and-conquer: Eigen 3.4.0's BDCSVD returns wrong
  // singular values on some of these matrices.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(b), Eigen::ComputeFullU | Eigen::ComputeThinV);
  const Eigen::MatrixXd& u_small = svd.matrixU();  // width x width
  Vector all_sigma = Vector::Zero(width);
  all_sigma.head(svd.singularValues().size()) = svd.singularValues();

  SvdFactors out;
  out.u = kernels::gemm(q, Matrix(u_small.leftCols(k)));
  out.sigma = all_sigma.head(k);
  canonicalize_signs(out.u);

  // Residual ||A v_i - sigma_i u_i|| for the columns that have a right vector.
  const Index with_right = std::min<Index>(k, svd.matrixV().cols());
  if (with_right > 0) {
    Matrix v = svd.matrixV().leftCols(with_right);
    // Re-derive signs consistently with the flipped left vectors.
    Matrix av = kernels::spmm(a, v);
    for (Index j = 0; j < with_right; ++j) {
      const double r1 = (av.col(j) - out.sigma(j) * out.u.col(j)).norm();
      const double r2 = (av.col(j) + out.sigma(j) * out.u.col(j)).norm();
      out.max_residual = std::max(out.max_residual, std::min(r1, r2));
    }
  }
  out.converged = out.max_residual <= opts.residual_tol;
  return out;
}

}  // namespace eagle
