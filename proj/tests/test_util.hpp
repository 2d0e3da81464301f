#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "eagle/graph.hpp"

namespace eagle::testing {

/// Random bipartite graph with every node used: the first max(nu, nv) edges
/// cover all nodes, the rest are uniform. Parallel edges are allowed.
inline Eabg random_graph(std::uint64_t seed, Index num_edges, Index nu, Index nv, Index dim = 3,
                         Index classes = 0) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Index, Index>> raw;
  const Index cover = std::max(nu, nv);
  for (Index i = 0; i < num_edges; ++i) {
    if (i < cover) raw.emplace_back(i % nu, i % nv);
    else raw.emplace_back(static_cast<Index>(rng() % nu), static_cast<Index>(rng() % nv));
  }
  std::shuffle(raw.begin(), raw.end(), rng);
  std::normal_distribution<double> n01;
  Matrix x(num_edges, dim);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = n01(rng);
  std::optional<Matrix> y;
  if (classes > 0) {
    Matrix l = Matrix::Zero(num_edges, classes);
    for (Index i = 0; i < num_edges; ++i) l(i, static_cast<Index>(rng() % classes)) = 1.0;
    y = l;
  }
  return compact_graph(raw, x, y);
}

/// Random graph with size drawn from the seed: |E| in [lo, hi], node counts
/// up to roughly half of |E| per side.
inline Eabg random_instance(std::uint64_t seed, Index lo, Index hi, Index dim = 3) {
  std::mt19937_64 rng(seed * 7919 + 13);
  const Index m = lo + static_cast<Index>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  const Index nu = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(std::max<Index>(1, m / 2)));
  const Index nv = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(std::max<Index>(1, m / 2)));
  return random_graph(seed, m, std::min(nu, m), std::min(nv, m), dim);
}

inline Eabg graph_of(const std::vector<std::pair<Index, Index>>& edges, Index dim = 1) {
  return compact_graph(edges, Matrix::Ones(static_cast<Index>(edges.size()), dim));
}

/// Transition matrix built by counting shared endpoints edge pair by edge
/// pair, independent of the incidence code.
inline Matrix naive_transition(const Eabg& g, double beta) {
  const Index m = g.num_edges();
  std::vector<double> du(g.num_u, 0.0), dv(g.num_v, 0.0);
  for (const auto& e : g.edges) {
    du[e.u] += 1;
    dv[e.v] += 1;
  }
  Matrix p = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const Edge& a = g.edges[i];
      const Edge& b = g.edges[j];
      if (a.u == b.u) p(i, j) += beta / du[a.u];
      if (a.v == b.v) p(i, j) += (1.0 - beta) / dv[a.v];
    }
  return p;
}

inline Matrix random_matrix(Index r, Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

}  // namespace eagle::testing
