#include "eagle/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

namespace eagle {

namespace {

// Seeded uniform integer in [0, n) that does not depend on the standard
// library's distribution implementation.
Index draw(std::mt19937_64& rng, Index n) { return static_cast<Index>(rng() % static_cast<std::uint64_t>(n)); }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Box-Muller on our own uniforms, for the same reason.
double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

void check_spec(const SyntheticSpec& s) {
  if (s.num_u < 1 || s.num_v < 1 || s.num_classes < 1 || s.dim < 1)
    throw InputError("gen_synthetic: node, class and attribute counts must be positive");
  if (s.num_edges < std::max(s.num_u, s.num_v))
    throw InputError("gen_synthetic: num_edges must be >= max(num_u, num_v) so every node has an edge");
  if (s.dim < s.num_classes) throw InputError("gen_synthetic: dim must be >= num_classes");
  if (!(s.structure_signal >= 0.0 && s.structure_signal <= 1.0))
    throw InputError("gen_synthetic: structure_signal must lie in [0, 1]");
  if (!(s.noise >= 0.0)) throw InputError("gen_synthetic: noise must be non-negative");
}

}  // namespace

std::vector<Index> synthetic_communities(const SyntheticSpec& spec) {
  check_spec(spec);
  std::mt19937_64 rng(spec.seed);
  std::vector<Index> perm(static_cast<std::size_t>(spec.num_u));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = spec.num_u - 1; i > 0; --i) std::swap(perm[i], perm[draw(rng, i + 1)]);
  std::vector<Index> community(perm.size());
  for (Index u = 0; u < spec.num_u; ++u) community[perm[u]] = u % spec.num_classes;
  return community;
}

Eabg gen_synthetic(const SyntheticSpec& spec) {
  const std::vector<Index> community = synthetic_communities(spec);
  // Separate stream from the community assignment.
  std::mt19937_64 rng(spec.seed ^ 0xD1B54A32D192ED03ULL);

  // The first max(|U|, |V|) edges cover every node, then the edge order is shuffled.
  std::vector<Edge> edges(static_cast<std::size_t>(spec.num_edges));
  for (Index i = 0; i < spec.num_edges; ++i) {
    edges[i].u = i < spec.num_u ? i : draw(rng, spec.num_u);
    edges[i].v = i < spec.num_v ? i : draw(rng, spec.num_v);
  }
  for (Index i = spec.num_edges - 1; i > 0; --i) std::swap(edges[i], edges[draw(rng, i + 1)]);

  Eabg g;
  g.num_u = spec.num_u;
  g.num_v = spec.num_v;
  g.edges = std::move(edges);
  g.attrs = Matrix::Zero(spec.num_edges, spec.dim);
  g.labels = Matrix::Zero(spec.num_edges, spec.num_classes);
  for (Index i = 0; i < spec.num_edges; ++i) {
    const Index from_structure = community[g.edges[i].u];
    const Index label = uniform01(rng) < spec.structure_signal ? from_structure : draw(rng, spec.num_classes);
    (*g.labels)(i, label) = 1.0;
    g.attrs(i, label) = 1.0 - spec.noise;
    if (spec.noise > 0.0)
      for (Index j = 0; j < spec.dim; ++j) g.attrs(i, j) += spec.noise * standard_normal(rng);
  }
  g.validate();
  return g;
}

BfsSample bfs_sample(const Eabg& g, std::optional<Index> start_edge, Index max_edges, std::uint64_t seed) {
  const Index m = g.num_edges();
  if (m == 0) throw InputError("bfs_sample: empty graph");
  if (max_edges < 1) throw InputError("bfs_sample: max_edges must be positive");
  std::mt19937_64 rng(seed);
  const Index start = start_edge ? *start_edge : draw(rng, m);
  if (start < 0 || start >= m) throw InputError("bfs_sample: start edge " + std::to_string(start) + " out of range");

  std::vector<std::vector<Index>> by_u(static_cast<std::size_t>(g.num_u)), by_v(static_cast<std::size_t>(g.num_v));
  for (Index i = 0; i < m; ++i) {
    by_u[g.edges[i].u].push_back(i);
    by_v[g.edges[i].v].push_back(i);
  }

  std::vector<char> visited(static_cast<std::size_t>(m), 0);
  std::vector<Index> taken;
  std::deque<Index> frontier{start};
  visited[start] = 1;
  taken.push_back(start);
  std::vector<Index> nbrs;
  while (!frontier.empty() && static_cast<Index>(taken.size()) < max_edges) {
    const Index e = frontier.front();
    frontier.pop_front();
    const auto& a = by_u[g.edges[e].u];
    const auto& b = by_v[g.edges[e].v];
    nbrs.clear();
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(nbrs));
    for (Index n : nbrs) {
      if (visited[n]) continue;
      visited[n] = 1;
      taken.push_back(n);
      frontier.push_back(n);
      if (static_cast<Index>(taken.size()) >= max_edges) break;
    }
  }
  std::sort(taken.begin(), taken.end());

  std::vector<std::pair<Index, Index>> raw;
  Matrix attrs(static_cast<Index>(taken.size()), g.dim());
  std::optional<Matrix> labels;
  if (g.labels) labels = Matrix(static_cast<Index>(taken.size()), g.num_classes());
  for (std::size_t i = 0; i < taken.size(); ++i) {
    const Index src = taken[i];
    raw.emplace_back(g.edges[src].u, g.edges[src].v);
    attrs.row(static_cast<Index>(i)) = g.attrs.row(src);
    if (labels) labels->row(static_cast<Index>(i)) = g.labels->row(src);
  }
  return {compact_graph(raw, std::move(attrs), std::move(labels)), std::move(taken)};
}

}  // namespace eagle
