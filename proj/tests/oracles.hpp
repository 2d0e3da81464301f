#pragma once

#include <functional>
#include <set>

#include "eagle/common.hpp"

namespace eagle::testing {

/// Precision-recall enumeration: for every distinct threshold, count the
/// predicted positives by scanning all points.
inline double brute_ap(const Vector& s, const Vector& y) {
  std::set<double, std::greater<>> thresholds(s.data(), s.data() + s.size());
  const double pos = y.sum();
  double ap = 0.0, prev_recall = 0.0;
  for (double t : thresholds) {
    double tp = 0, fp = 0;
    for (Index i = 0; i < s.size(); ++i)
      if (s(i) >= t) (y(i) > 0.5 ? tp : fp) += 1;
    const double recall = tp / pos;
    ap += (recall - prev_recall) * tp / (tp + fp);
    prev_recall = recall;
  }
  return ap;
}

/// Fraction of (positive, negative) pairs ranked correctly, ties counted half.
inline double brute_auc(const Vector& s, const Vector& y) {
  double num = 0, pairs = 0;
  for (Index i = 0; i < s.size(); ++i)
    for (Index j = 0; j < s.size(); ++j)
      if (y(i) > 0.5 && y(j) < 0.5) {
        pairs += 1;
        num += s(i) > s(j) ? 1.0 : (s(i) == s(j) ? 0.5 : 0.0);
      }
  return num / pairs;
}

}  // namespace eagle::testing
