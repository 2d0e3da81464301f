#pragma once

#include "eagle/common.hpp"
#include "eagle/graph.hpp"
#include "eagle/svd.hpp"

namespace eagle {

/// Mixing diagnostics of P = beta P_U + (1 - beta) P_V.
struct SpectralReport {
  double sigma2 = 0.0;
  double sigma2_sq = 0.0;
  double inv_gap = 1.0;          // 1 / (1 - sigma2^2); +inf for a reducible chain
  double mix_lower_bound = 0.0;  // 1 / (1 - sigma2^2) - 1
  double sigma_k = 0.0;
  double theorem1_bound = 1.0;   // 1 / (1 - alpha sigma_k^2)
  Index k = 0;
  double alpha = 0.5;
  double beta = 0.5;
  Index num_edges = 0;
  Index duplicate_pairs = 0;
  bool svd_converged = true;
};

/// sigma_2 below this distance from 1 counts as a disconnected edge graph.
inline constexpr double kUnitGapTol = 1e-12;

SpectralReport spectral_report(const Eabg& g, double alpha, double beta, Index k, const SvdOptions& opts = {});

/// Fills the derived fields from sigma_2 and sigma_k.
SpectralReport make_report(double sigma2, double sigma_k, double alpha, double beta, Index k);

/// Variance of each column of P^t f under the uniform (stationary)
/// distribution of the doubly stochastic P. Each column of f is one function
/// on the edge states; the result has one entry per column.
Vector variance_contraction(const Matrix& p_dense, const Matrix& f, Index t, std::size_t cap = kDefaultDenseCap);

}  // namespace eagle
