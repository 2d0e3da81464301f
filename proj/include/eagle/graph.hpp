#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "eagle/common.hpp"
#include "eagle/csr.hpp"

namespace eagle {

struct Edge {
  Index u;
  Index v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge-attributed bipartite graph. Nodes of U and V are compact indices;
/// every node has at least one incident edge. Edge i carries attrs.row(i)
/// and, when present, a multi-hot label row.
struct Eabg {
  Index num_u = 0;
  Index num_v = 0;
  std::vector<Edge> edges;
  Matrix attrs;
  std::optional<Matrix> labels;

  Index num_edges() const { return static_cast<Index>(edges.size()); }
  Index dim() const { return attrs.cols(); }
  Index num_classes() const { return labels ? labels->cols() : 0; }

  /// Throws InputError (DegenerateGraphError for unused nodes) on any
  /// invariant breach.
  void validate() const;
};

/// Builds a graph from raw endpoint ids, compacting each side to
/// 0..n-1 in order of first appearance.
Eabg compact_graph(const std::vector<std::pair<Index, Index>>& raw_edges, Matrix attrs,
                   std::optional<Matrix> labels = std::nullopt);

/// Number of edges whose (u, v) pair already occurred on a smaller edge id.
Index count_duplicate_pairs(const Eabg& g);

/// Edge-node indicator matrices E_U (|E|x|U|), E_V (|E|x|V|) and node degrees.
struct IncidencePair {
  SparseCsr e_u;
  SparseCsr e_v;
  Vector deg_u;
  Vector deg_v;
};

IncidencePair build_incidence(const Eabg& g);

enum class Side { U, V };

/// E_S D_S^{-1/2}: one nonzero 1/sqrt(deg) per row.
SparseCsr normalized_incidence(const IncidencePair& inc, Side side);

/// sqrt(beta) E_U D_U^{-1/2} || sqrt(1-beta) E_V D_V^{-1/2}, so that
/// B B^T = beta P_U + (1-beta) P_V.
SparseCsr combined_incidence(const IncidencePair& inc, double beta);

/// P_U = E_U D_U^{-1} E_U^T, sparse and symmetric.
SparseCsr transition_u(const IncidencePair& inc);
SparseCsr transition_v(const IncidencePair& inc);

/// beta P_U + (1 - beta) P_V as a dense matrix. Refuses graphs above `cap` edges.
Matrix dense_transition(const IncidencePair& inc, double beta, std::size_t cap = kDefaultDenseCap);

void check_dense_cap(Index edges, std::size_t cap);

}  // namespace eagle
