#include "eagle/graph.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace eagle {

void Eabg::validate() const {
  if (num_u < 0 || num_v < 0) throw InputError("negative node count");
  if (attrs.rows() != num_edges()) {
    std::ostringstream msg;
    msg << "attribute rows (" << attrs.rows() << ") != edges (" << num_edges() << ")";
    throw InputError(msg.str());
  }
  if (!attrs.allFinite()) throw InputError("attributes contain non-finite values");
  std::vector<char> seen_u(static_cast<std::size_t>(num_u), 0);
  std::vector<char> seen_v(static_cast<std::size_t>(num_v), 0);
  for (Index i = 0; i < num_edges(); ++i) {
    const auto& e = edges[static_cast<std::size_t>(i)];
    if (e.u < 0 || e.u >= num_u || e.v < 0 || e.v >= num_v) {
      std::ostringstream msg;
      msg << "edge " << i << " = (" << e.u << ", " << e.v << ") outside " << num_u << "x" << num_v;
      throw InputError(msg.str());
    }
    seen_u[static_cast<std::size_t>(e.u)] = 1;
    seen_v[static_cast<std::size_t>(e.v)] = 1;
  }
  for (Index u = 0; u < num_u; ++u)
    if (!seen_u[static_cast<std::size_t>(u)])
      throw DegenerateGraphError("U-node " + std::to_string(u) + " has no incident edge");
  for (Index v = 0; v < num_v; ++v)
    if (!seen_v[static_cast<std::size_t>(v)])
      throw DegenerateGraphError("V-node " + std::to_string(v) + " has no incident edge");
  if (labels) {
    if (labels->rows() != num_edges()) {
      std::ostringstream msg;
      msg << "label rows (" << labels->rows() << ") != edges (" << num_edges() << ")";
      throw InputError(msg.str());
    }
    for (Index i = 0; i < labels->rows(); ++i)
      for (Index j = 0; j < labels->cols(); ++j)
        if ((*labels)(i, j) != 0.0 && (*labels)(i, j) != 1.0)
          throw InputError("label entry of edge " + std::to_string(i) + " is not 0/1");
  }
}

Eabg compact_graph(const std::vector<std::pair<Index, Index>>& raw_edges, Matrix attrs,
                   std::optional<Matrix> labels) {
  std::unordered_map<Index, Index> u_ids, v_ids;
  Eabg g;
  g.edges.reserve(raw_edges.size());
  for (const auto& [ru, rv] : raw_edges) {
    const Index u = u_ids.try_emplace(ru, static_cast<Index>(u_ids.size())).first->second;
    const Index v = v_ids.try_emplace(rv, static_cast<Index>(v_ids.size())).first->second;
    g.edges.push_back({u, v});
  }
  g.num_u = static_cast<Index>(u_ids.size());
  g.num_v = static_cast<Index>(v_ids.size());
  g.attrs = std::move(attrs);
  g.labels = std::move(labels);
  g.validate();
  return g;
}

Index count_duplicate_pairs(const Eabg& g) {
  std::map<std::pair<Index, Index>, int> seen;
  Index dup = 0;
  for (const auto& e : g.edges)
    if (seen[{e.u, e.v}]++ > 0) ++dup;
  return dup;
}

namespace {

SparseCsr indicator(Index rows, Index cols, const std::vector<Edge>& edges, Side side) {
  std::vector<Index> row_ptr(static_cast<std::size_t>(rows) + 1);
  std::vector<Index> col_idx(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) {
    row_ptr[static_cast<std::size_t>(i)] = i;
    const auto& e = edges[static_cast<std::size_t>(i)];
    col_idx[static_cast<std::size_t>(i)] = side == Side::U ? e.u : e.v;
  }
  row_ptr.back() = rows;
  return SparseCsr(rows, cols, std::move(row_ptr), std::move(col_idx),
                   std::vector<double>(static_cast<std::size_t>(rows), 1.0));
}

// Rescales each row's single entry by a per-column factor.
SparseCsr scale_columns(const SparseCsr& a, const Vector& factor) {
  std::vector<double> values = a.values();
  for (std::size_t p = 0; p < values.size(); ++p) values[p] *= factor(a.col_idx()[p]);
  return SparseCsr(a.rows(), a.cols(), a.row_ptr(), a.col_idx(), std::move(values));
}

SparseCsr transition(const SparseCsr& e, const Vector& deg) {
  // Entry (i, j) is 1/deg(n) when edges i and j share node n.
  const SparseCsr by_node = e.transpose();
  std::vector<Triplet> trips;
  for (Index i = 0; i < e.rows(); ++i) {
    for (Index p = e.row_ptr()[i]; p < e.row_ptr()[i + 1]; ++p) {
      const Index node = e.col_idx()[p];
      const double w = 1.0 / deg(node);
      for (Index q = by_node.row_ptr()[node]; q < by_node.row_ptr()[node + 1]; ++q)
        trips.push_back({i, by_node.col_idx()[q], w});
    }
  }
  return SparseCsr::from_triplets(e.rows(), e.rows(), std::move(trips));
}

}  // namespace

IncidencePair build_incidence(const Eabg& g) {
  const Index m = g.num_edges();
  for (const auto& e : g.edges)
    if (e.u < 0 || e.u >= g.num_u || e.v < 0 || e.v >= g.num_v)
      throw InputError("edge endpoint outside node range");
  IncidencePair inc{indicator(m, g.num_u, g.edges, Side::U), indicator(m, g.num_v, g.edges, Side::V), {}, {}};
  inc.deg_u = inc.e_u.col_sums();
  inc.deg_v = inc.e_v.col_sums();
  for (Index u = 0; u < g.num_u; ++u)
    if (inc.deg_u(u) < 1.0) throw DegenerateGraphError("U-node " + std::to_string(u) + " has degree 0");
  for (Index v = 0; v < g.num_v; ++v)
    if (inc.deg_v(v) < 1.0) throw DegenerateGraphError("V-node " + std::to_string(v) + " has degree 0");
  return inc;
}

SparseCsr normalized_incidence(const IncidencePair& inc, Side side) {
  return side == Side::U ? scale_columns(inc.e_u, inc.deg_u.cwiseSqrt().cwiseInverse())
                         : scale_columns(inc.e_v, inc.deg_v.cwiseSqrt().cwiseInverse());
}

SparseCsr combined_incidence(const IncidencePair& inc, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InputError("beta must lie in [0, 1]");
  return hstack(scaled(normalized_incidence(inc, Side::U), std::sqrt(beta)),
                scaled(normalized_incidence(inc, Side::V), std::sqrt(1.0 - beta)));
}

SparseCsr transition_u(const IncidencePair& inc) { return transition(inc.e_u, inc.deg_u); }
SparseCsr transition_v(const IncidencePair& inc) { return transition(inc.e_v, inc.deg_v); }

void check_dense_cap(Index edges, std::size_t cap) {
  if (edges < 0 || static_cast<std::size_t>(edges) > cap)
    throw InputError("dense |E|x|E| materialization refused: " + std::to_string(edges) +
                     " edges exceeds cap " + std::to_string(cap));
}

Matrix dense_transition(const IncidencePair& inc, double beta, std::size_t cap) {
  check_dense_cap(inc.e_u.rows(), cap);
  if (!(beta >= 0.0 && beta <= 1.0)) throw InputError("beta must lie in [0, 1]");
  return beta * transition_u(inc).to_dense() + (1.0 - beta) * transition_v(inc).to_dense();
}

}  // namespace eagle
