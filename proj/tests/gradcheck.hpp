#pragma once

#include <algorithm>
#include <cmath>

#include "eagle/model.hpp"

namespace eagle::testing {

struct GradCheck {
  double max_rel_error = 0.0;
  Index coordinates = 0;
};

/// Central differences of the dropout-free training loss against backward().
/// Relative error is |a - n| / max(|a|, |n|, floor).
inline GradCheck check_gradients(const PropagationPlan& plan, const ModelParams& params, const Matrix& x,
                                 const Matrix& y, const std::vector<Index>& rows, double step = 1e-6,
                                 double floor = 1e-8) {
  const Gradients g = backward(plan, params, x, forward(plan, params, x), y, rows);
  GradCheck out;
  auto sweep = [&](Matrix ModelParams::*member, const Matrix& analytic) {
    ModelParams p = params;
    Matrix& w = p.*member;
    for (Index i = 0; i < w.size(); ++i) {
      const double orig = w.data()[i];
      w.data()[i] = orig + step;
      const double up = bce_loss(forward(plan, p, x).probs, y, rows);
      w.data()[i] = orig - step;
      const double down = bce_loss(forward(plan, p, x).probs, y, rows);
      w.data()[i] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic.data()[i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      out.max_rel_error = std::max(out.max_rel_error, rel);
      ++out.coordinates;
    }
  };
  sweep(&ModelParams::theta, g.theta);
  if (plan.mode == Mode::DvFfp) sweep(&ModelParams::theta_v, g.theta_v);
  sweep(&ModelParams::omega, g.omega);
  return out;
}

}  // namespace eagle::testing
