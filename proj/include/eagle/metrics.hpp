#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "eagle/common.hpp"
#include "eagle/graph.hpp"

namespace eagle {

struct DataSplit {
  std::vector<Index> train_idx;
  std::vector<Index> val_idx;
  std::vector<Index> test_idx;
};

/// Seeded uniform permutation of all labeled edges, sliced contiguously.
/// Needs at least 10 edges.
DataSplit make_split(const Eabg& g, std::array<double, 3> ratios = {0.8, 0.1, 0.1}, std::uint64_t seed = 0);

/// Step-wise area under the precision-recall curve over descending score
/// thresholds; equal scores enter at one threshold.
double average_precision(const Vector& scores, const Vector& labels);

/// Probability that a random positive outscores a random negative, ties 1/2.
double roc_auc(const Vector& scores, const Vector& labels);

struct MetricReport {
  double ap = 0.0;
  double auc = 0.0;
  Vector per_class_ap;   // NaN where the class was skipped
  Vector per_class_auc;
  std::vector<Index> skipped_classes;
};

/// Macro AP and AUC over the rows in `rows`, skipping classes that lack either
/// positives or negatives there.
MetricReport evaluate(const Matrix& probs, const Matrix& labels, const std::vector<Index>& rows);

}  // namespace eagle
