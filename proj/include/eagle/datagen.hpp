#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eagle/graph.hpp"

namespace eagle {

struct SyntheticSpec {
  Index num_u = 200;
  Index num_v = 100;
  Index num_edges = 4000;
  Index dim = 32;
  Index num_classes = 4;
  /// Probability that an edge takes its U-endpoint's community as label.
  double structure_signal = 0.9;
  /// Scale of the standard-normal attribute noise; the class one-hot is
  /// scaled by (1 - noise).
  double noise = 0.5;
  std::uint64_t seed = 7;
};

/// U-nodes are split into num_classes balanced communities. V-endpoints are
/// uniform, so only the U side carries label structure.
Eabg gen_synthetic(const SyntheticSpec& spec);

/// Community of every U-node, as assigned by gen_synthetic for `spec`.
std::vector<Index> synthetic_communities(const SyntheticSpec& spec);

struct BfsSample {
  Eabg graph;
  std::vector<Index> source_edges;  // original ids, ascending
};

/// Breadth-first search over edge adjacency (two edges are adjacent when they
/// share an endpoint), neighbours visited in ascending edge id, stopping at
/// max_edges. Without start_edge the start is drawn from `seed`.
BfsSample bfs_sample(const Eabg& g, std::optional<Index> start_edge, Index max_edges, std::uint64_t seed = 0);

}  // namespace eagle
