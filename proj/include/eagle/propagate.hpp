#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>

#include "eagle/common.hpp"
#include "eagle/graph.hpp"
#include "eagle/svd.hpp"

namespace eagle {

/// Which transition matrix a propagator approximates.
struct View {
  enum class Kind { Combined, U, V };
  Kind kind = Kind::Combined;
  double beta = 0.5;  // only meaningful for Combined

  static View combined(double beta) { return {Kind::Combined, beta}; }
  static View u_side() { return {Kind::U, 1.0}; }
  static View v_side() { return {Kind::V, 0.0}; }

  std::string name() const;
  friend bool operator==(const View&, const View&) = default;
};

/// Normalized incidence whose Gram matrix is the view's transition matrix.
SparseCsr view_incidence(const IncidencePair& inc, const View& view);

/// Q = U (1 - alpha Sigma^2)^{-1/2} for one view.
struct PropagatorQ {
  Matrix q;
  Vector sigma;  // clamped to [0, 1]
  View view;
  double alpha = 0.5;
  Index k = 0;
  bool svd_converged = true;
};

/// Builds Q from already computed SVD factors of the view's incidence.
PropagatorQ make_q(const SvdFactors& svd, double alpha, const View& view);

PropagatorQ build_q(const Eabg& g, double alpha, const View& view, Index k, const SvdOptions& opts = {});

/// Memoizes SVDs per (view, k, svd options); Q for a new alpha, gamma or
/// combinator reuses the stored factors.
class SvdCache {
 public:
  explicit SvdCache(const Eabg& g);

  const SvdFactors& factors(const View& view, Index k, const SvdOptions& opts);
  PropagatorQ q(const View& view, double alpha, Index k, const SvdOptions& opts);
  const IncidencePair& incidence() const { return inc_; }

  /// Number of SVDs actually computed.
  Index svd_count() const { return svd_count_; }

 private:
  using Key = std::tuple<int, double, Index, std::uint64_t, Index, Index>;
  IncidencePair inc_;
  std::map<Key, SvdFactors> store_;
  Index svd_count_ = 0;
};

/// Linear edge-feature propagation h -> Z. Either the factorized operator
/// (1 - alpha) Q Q^T, or the exact (1 - alpha)(I - alpha P)^{-1} evaluated by
/// power iteration (the "k = infinity" setting). Both are symmetric, so the
/// same apply() also serves as the backward pass.
class Propagator {
 public:
  static Propagator factorized(PropagatorQ q);
  static Propagator exact(const IncidencePair& inc, const View& view, double alpha, double tol = 1e-10,
                          Index max_iters = 100000);

  Matrix apply(const Matrix& h) const;
  const View& view() const { return view_; }
  double alpha() const { return alpha_; }
  bool is_factorized() const { return q_ != nullptr; }
  const PropagatorQ& q() const { return *q_; }

 private:
  std::shared_ptr<const PropagatorQ> q_;
  std::shared_ptr<const SparseCsr> b_;
  std::shared_ptr<const SparseCsr> bt_;
  View view_;
  double alpha_ = 0.5;
  double tol_ = 1e-10;
  Index max_iters_ = 100000;
};

enum class Combinator { Sum, Max, Concat };

Combinator parse_combinator(const std::string& s);
std::string to_string(Combinator c);

struct EdgeEmbedding {
  Matrix z;
  std::string provenance;
};

/// Z = (1 - alpha) Q (Q^T h), right to left.
EdgeEmbedding propagate_ffp(const PropagatorQ& q, const Matrix& h);

/// f_combine(gamma Z_U, (1 - gamma) Z_V) over the per-view propagations.
EdgeEmbedding propagate_dual(const PropagatorQ& qu, const PropagatorQ& qv, const Matrix& hu, const Matrix& hv,
                             double gamma, Combinator combinator);

/// Sum: a + b. Max: elementwise, ties to a. Concat: [a | b].
Matrix combine(const Matrix& a, const Matrix& b, Combinator combinator);

/// (1 - alpha) ||Z - h||_F^2 + alpha * O_r with O_r summed over ordered edge
/// pairs sharing a node, weighted by 1/deg. Dense-cap guarded.
double objective_value(const Eabg& g, const Matrix& z, const Matrix& h, double alpha, double beta,
                       std::size_t cap = kDefaultDenseCap);

}  // namespace eagle
