#pragma once

#include <cstdint>

#include "eagle/common.hpp"
#include "eagle/csr.hpp"

namespace eagle {

struct SvdOptions {
  std::uint64_t seed = 0;
  Index oversample = 10;
  Index power_iters = 7;
  /// Largest acceptable ||A v_i - sigma_i u_i||; above it `converged` is false.
  double residual_tol = 1e-6;
};

/// Top-k left singular vectors and values. Columns of u are orthonormal,
/// sigma is non-increasing, and every column's largest-magnitude entry is
/// positive.
struct SvdFactors {
  Matrix u;
  Vector sigma;
  double max_residual = 0.0;
  bool converged = true;

  Index k() const { return sigma.size(); }
};

/// Randomized range finder with power iterations followed by an exact SVD of
/// the projected matrix.
///
/// k may exceed a.cols() (up to a.rows()): the trailing vectors then span the
/// orthogonal complement of the column space and carry singular value 0, so
/// k == a.rows() always yields a complete orthonormal basis.
SvdFactors truncated_svd(const SparseCsr& a, Index k, const SvdOptions& opts = {});

/// Flips column signs so that each column's largest-magnitude entry is positive.
void canonicalize_signs(Matrix& u);

}  // namespace eagle
