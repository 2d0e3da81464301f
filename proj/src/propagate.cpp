#include "eagle/propagate.hpp"

#include <algorithm>
#include <cmath>

#include "eagle/kernels.hpp"
#include "eagle/solvers.hpp"

namespace eagle {

namespace {

constexpr double kMinGap = 1e-12;

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("alpha must lie in [0, 1)");
}

}  // namespace

std::string View::name() const {
  switch (kind) {
    case Kind::U: return "u";
    case Kind::V: return "v";
    case Kind::Combined: break;
  }
  return "combined(beta=" + std::to_string(beta) + ")";
}

SparseCsr view_incidence(const IncidencePair& inc, const View& view) {
  switch (view.kind) {
    case View::Kind::U: return normalized_incidence(inc, Side::U);
    case View::Kind::V: return normalized_incidence(inc, Side::V);
    case View::Kind::Combined: break;
  }
  // The zero block of an endpoint beta adds nothing to B B^T; dropping it makes
  // FFP at beta = 1 (0) identical to the U (V) view.
  if (view.beta == 1.0) return normalized_incidence(inc, Side::U);
  if (view.beta == 0.0) return normalized_incidence(inc, Side::V);
  return combined_incidence(inc, view.beta);
}

PropagatorQ make_q(const SvdFactors& svd, double alpha, const View& view) {
  check_alpha(alpha);
  PropagatorQ out;
  out.sigma = svd.sigma.cwiseMax(0.0).cwiseMin(1.0);
  out.view = view;
  out.alpha = alpha;
  out.k = svd.k();
  out.svd_converged = svd.converged;
  out.q = svd.u;
  for (Index j = 0; j < out.k; ++j) {
    const double gap = std::max(1.0 - alpha * out.sigma(j) * out.sigma(j), kMinGap);
    out.q.col(j) *= 1.0 / std::sqrt(gap);
  }
  return out;
}

PropagatorQ build_q(const Eabg& g, double alpha, const View& view, Index k, const SvdOptions& opts) {
  check_alpha(alpha);
  if (k < 1 || k > g.num_edges())
    throw InputError("k = " + std::to_string(k) + " outside [1, |E| = " + std::to_string(g.num_edges()) + "]");
  const IncidencePair inc = build_incidence(g);
  return make_q(truncated_svd(view_incidence(inc, view), k, opts), alpha, view);
}

SvdCache::SvdCache(const Eabg& g) : inc_(build_incidence(g)) {}

const SvdFactors& SvdCache::factors(const View& view, Index k, const SvdOptions& opts) {
  const double beta = view.kind == View::Kind::Combined ? view.beta : -1.0;
  const Key key{static_cast<int>(view.kind), beta, k, opts.seed, opts.oversample, opts.power_iters};
  auto it = store_.find(key);
  if (it == store_.end()) {
    if (k < 1 || k > inc_.e_u.rows())
      throw InputError("k = " + std::to_string(k) + " outside [1, |E| = " + std::to_string(inc_.e_u.rows()) + "]");
    it = store_.emplace(key, truncated_svd(view_incidence(inc_, view), k, opts)).first;
    ++svd_count_;
  }
  return it->second;
}

PropagatorQ SvdCache::q(const View& view, double alpha, Index k, const SvdOptions& opts) {
  return make_q(factors(view, k, opts), alpha, view);
}

Propagator Propagator::factorized(PropagatorQ q) {
  Propagator p;
  p.view_ = q.view;
  p.alpha_ = q.alpha;
  p.q_ = std::make_shared<const PropagatorQ>(std::move(q));
  return p;
}

Propagator Propagator::exact(const IncidencePair& inc, const View& view, double alpha, double tol, Index max_iters) {
  check_alpha(alpha);
  Propagator p;
  p.view_ = view;
  p.alpha_ = alpha;
  p.tol_ = tol;
  p.max_iters_ = max_iters;
  auto b = std::make_shared<const SparseCsr>(view_incidence(inc, view));
  p.bt_ = std::make_shared<const SparseCsr>(b->transpose());
  p.b_ = std::move(b);
  return p;
}

Matrix Propagator::apply(const Matrix& h) const {
  if (q_) {
    require_dims(h.rows() == q_->q.rows(), "propagate: feature rows != |E|");
    return kernels::lowrank_apply(q_->q, h, 1.0 - alpha_);
  }
  require_dims(h.rows() == b_->rows(), "propagate: feature rows != |E|");
  const SparseCsr& b = *b_;
  const SparseCsr& bt = *bt_;
  auto matvec = [&](const Matrix& z) { return kernels::spmm(b, kernels::spmm(bt, z)); };
  return power_iteration_solve(matvec, alpha_, h, tol_, max_iters_).z;
}

Combinator parse_combinator(const std::string& s) {
  if (s == "sum") return Combinator::Sum;
  if (s == "max") return Combinator::Max;
  if (s == "concat") return Combinator::Concat;
  throw InputError("unknown combinator '" + s + "' (expected sum, max or concat)");
}

std::string to_string(Combinator c) {
  switch (c) {
    case Combinator::Sum: return "sum";
    case Combinator::Max: return "max";
    case Combinator::Concat: return "concat";
  }
  return "?";
}

Matrix combine(const Matrix& a, const Matrix& b, Combinator combinator) {
  require_dims(a.rows() == b.rows() && a.cols() == b.cols(), "combine: operand shapes differ");
  switch (combinator) {
    case Combinator::Sum: return a + b;
    case Combinator::Max: {
      Matrix out(a.rows(), a.cols());
      for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out(i, j) = b(i, j) > a(i, j) ? b(i, j) : a(i, j);
      return out;
    }
    case Combinator::Concat: {
      Matrix out(a.rows(), a.cols() + b.cols());
      out << a, b;
      return out;
    }
  }
  throw InputError("combine: unknown combinator");
}

EdgeEmbedding propagate_ffp(const PropagatorQ& q, const Matrix& h) {
  require_dims(h.rows() == q.q.rows(), "propagate_ffp: feature rows != |E|");
  return {kernels::lowrank_apply(q.q, h, 1.0 - q.alpha), "ffp/" + q.view.name()};
}

EdgeEmbedding propagate_dual(const PropagatorQ& qu, const PropagatorQ& qv, const Matrix& hu, const Matrix& hv,
                             double gamma, Combinator combinator) {
  if (qu.view.kind != View::Kind::U || qv.view.kind != View::Kind::V)
    throw InputError("propagate_dual: expects a U-view and a V-view propagator");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InputError("gamma must lie in [0, 1]");
  require_dims(hu.rows() == hv.rows() && hu.cols() == hv.cols(), "propagate_dual: hu and hv shapes differ");
  const Matrix zu = propagate_ffp(qu, hu).z;
  const Matrix zv = propagate_ffp(qv, hv).z;
  return {combine(gamma * zu, (1.0 - gamma) * zv, combinator), "dvffp/" + to_string(combinator)};
}

double objective_value(const Eabg& g, const Matrix& z, const Matrix& h, double alpha, double beta, std::size_t cap) {
  check_dense_cap(g.num_edges(), cap);
  require_dims(z.rows() == g.num_edges() && h.rows() == z.rows() && h.cols() == z.cols(),
               "objective_value: Z and h must both be |E| x z");
  const double fit = (z - h).squaredNorm();

  // Group edges by endpoint, then sum over ordered pairs inside each group.
  auto side_term = [&](Index nodes, auto endpoint) {
    std::vector<std::vector<Index>> groups(static_cast<std::size_t>(nodes));
    for (Index i = 0; i < g.num_edges(); ++i) groups[static_cast<std::size_t>(endpoint(g.edges[i]))].push_back(i);
    double total = 0.0;
    for (const auto& grp : groups) {
      const double w = 1.0 / static_cast<double>(grp.size());
      for (Index i : grp)
        for (Index j : grp) total += w * (z.row(i) - z.row(j)).squaredNorm();
    }
    return total;
  };
  const double reg = beta / 2.0 * side_term(g.num_u, [](const Edge& e) { return e.u; }) +
                     (1.0 - beta) / 2.0 * side_term(g.num_v, [](const Edge& e) { return e.v; });
  return (1.0 - alpha) * fit + alpha * reg;
}

}  // namespace eagle
