#include "eagle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace eagle {

DataSplit make_split(const Eabg& g, std::array<double, 3> ratios, std::uint64_t seed) {
  if (!g.labels) throw InputError("make_split: graph has no labels");
  const Index n = g.num_edges();
  if (n < 10) throw InputError("make_split: need at least 10 labeled edges, got " + std::to_string(n));
  for (double r : ratios)
    if (!(r >= 0.0)) throw InputError("make_split: ratios must be non-negative");
  const double total = ratios[0] + ratios[1] + ratios[2];
  if (!(total > 0.0)) throw InputError("make_split: ratios sum to zero");

  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with explicit draws: std::shuffle's algorithm is unspecified.
  for (Index i = n - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }

  const auto n_train = static_cast<Index>(std::llround(static_cast<double>(n) * ratios[0] / total));
  const auto n_val = std::min(n - n_train, static_cast<Index>(std::llround(static_cast<double>(n) * ratios[1] / total)));
  DataSplit s;
  s.train_idx.assign(perm.begin(), perm.begin() + n_train);
  s.val_idx.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
  s.test_idx.assign(perm.begin() + n_train + n_val, perm.end());
  return s;
}

namespace {

void count_classes(const Vector& labels, double& pos, double& neg) {
  pos = 0;
  neg = 0;
  for (Index i = 0; i < labels.size(); ++i) (labels(i) > 0.5 ? pos : neg) += 1.0;
}

std::vector<Index> descending_order(const Vector& scores) {
  std::vector<Index> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return scores(a) > scores(b); });
  return order;
}

void check_inputs(const Vector& scores, const Vector& labels, const char* who) {
  require_dims(scores.size() == labels.size(), std::string(who) + ": scores and labels differ in length");
  double pos, neg;
  count_classes(labels, pos, neg);
  if (pos == 0 || neg == 0)
    throw InputError(std::string(who) + ": need at least one positive and one negative label");
}

}  // namespace

double average_precision(const Vector& scores, const Vector& labels) {
  check_inputs(scores, labels, "average_precision");
  double pos, neg;
  count_classes(labels, pos, neg);
  const auto order = descending_order(scores);
  double tp = 0, fp = 0, prev_recall = 0, ap = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores(order[i]);
    for (; i < order.size() && scores(order[i]) == s; ++i) (labels(order[i]) > 0.5 ? tp : fp) += 1.0;
    const double recall = tp / pos;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
  }
  return ap;
}

double roc_auc(const Vector& scores, const Vector& labels) {
  check_inputs(scores, labels, "roc_auc");
  double pos, neg;
  count_classes(labels, pos, neg);
  // Mann-Whitney U from mid-ranks (ascending, 1-based).
  auto order = descending_order(scores);
  std::reverse(order.begin(), order.end());
  double rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores(order[j]) == scores(order[i])) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t)
      if (labels(order[t]) > 0.5) rank_sum += mid;
    i = j;
  }
  return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg);
}

MetricReport evaluate(const Matrix& probs, const Matrix& labels, const std::vector<Index>& rows) {
  require_dims(probs.rows() == labels.rows() && probs.cols() == labels.cols(),
               "evaluate: predictions and labels differ in shape");
  if (rows.empty()) throw InputError("evaluate: empty row subset");
  const Index c = labels.cols();
  MetricReport r;
  r.per_class_ap = Vector::Constant(c, std::numeric_limits<double>::quiet_NaN());
  r.per_class_auc = r.per_class_ap;
  double ap_sum = 0, auc_sum = 0;
  Index used = 0;
  for (Index j = 0; j < c; ++j) {
    Vector s(static_cast<Index>(rows.size())), y(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      s(static_cast<Index>(i)) = probs(rows[i], j);
      y(static_cast<Index>(i)) = labels(rows[i], j);
    }
    const double pos = y.sum();
    if (pos == 0 || pos == static_cast<double>(rows.size())) {
      r.skipped_classes.push_back(j);
      continue;
    }
    r.per_class_ap(j) = average_precision(s, y);
    r.per_class_auc(j) = roc_auc(s, y);
    ap_sum += r.per_class_ap(j);
    auc_sum += r.per_class_auc(j);
    ++used;
  }
  if (used == 0) throw InputError("evaluate: no class has both positives and negatives in the subset");
  r.ap = ap_sum / static_cast<double>(used);
  r.auc = auc_sum / static_cast<double>(used);
  return r;
}

}  // namespace eagle
