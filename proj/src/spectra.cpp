#include "eagle/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eagle/kernels.hpp"

namespace eagle {

SpectralReport make_report(double sigma2, double sigma_k, double alpha, double beta, Index k) {
  SpectralReport r;
  r.alpha = alpha;
  r.beta = beta;
  r.k = k;
  r.sigma2 = std::clamp(sigma2, 0.0, 1.0);
  r.sigma2_sq = r.sigma2 * r.sigma2;
  const double gap = 1.0 - r.sigma2_sq;
  if (gap <= kUnitGapTol) {
    r.inv_gap = std::numeric_limits<double>::infinity();
    r.mix_lower_bound = std::numeric_limits<double>::infinity();
  } else {
    r.inv_gap = 1.0 / gap;
    r.mix_lower_bound = r.inv_gap - 1.0;
  }
  r.sigma_k = std::clamp(sigma_k, 0.0, 1.0);
  r.theorem1_bound = 1.0 / (1.0 - alpha * r.sigma_k * r.sigma_k);
  return r;
}

SpectralReport spectral_report(const Eabg& g, double alpha, double beta, Index k, const SvdOptions& opts) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("alpha must lie in [0, 1)");
  const Index m = g.num_edges();
  if (k < 1 || k > m) throw InputError("k = " + std::to_string(k) + " outside [1, |E|]");
  const IncidencePair inc = build_incidence(g);
  const SparseCsr b = combined_incidence(inc, beta);
  // sigma_2 needs at least two singular values; a single edge has only one.
  const SvdFactors svd = truncated_svd(b, std::min<Index>(std::max<Index>(k, 2), m), opts);
  const double sigma2 = svd.k() >= 2 ? svd.sigma(1) : 0.0;
  SpectralReport r = make_report(sigma2, svd.sigma(k - 1), alpha, beta, k);
  r.num_edges = m;
  r.duplicate_pairs = count_duplicate_pairs(g);
  r.svd_converged = svd.converged;
  return r;
}

Vector variance_contraction(const Matrix& p_dense, const Matrix& f, Index t, std::size_t cap) {
  require_dims(p_dense.rows() == p_dense.cols() && f.rows() == p_dense.rows(),
               "variance_contraction: P must be square with |E| rows matching f");
  check_dense_cap(p_dense.rows(), cap);
  if (t < 0) throw InputError("variance_contraction: negative t");
  Matrix g = f;
  for (Index s = 0; s < t; ++s) g = kernels::gemm(p_dense, g);
  const double n = static_cast<double>(g.rows());
  Vector var(g.cols());
  for (Index j = 0; j < g.cols(); ++j) {
    const double mean = g.col(j).sum() / n;
    var(j) = (g.col(j).array() - mean).square().sum() / n;
  }
  return var;
}

}  // namespace eagle
