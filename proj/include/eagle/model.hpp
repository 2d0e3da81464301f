#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eagle/common.hpp"
#include "eagle/metrics.hpp"
#include "eagle/propagate.hpp"

namespace eagle {

/// ffp: single propagator over beta P_U + (1 - beta) P_V.
/// dvffp: separate U- and V-view propagators, combined with gamma.
/// fc: structure-free control (attribute transform + head, no propagation).
enum class Mode { Ffp, DvFfp, Fc };

Mode parse_mode(const std::string& s);
std::string to_string(Mode m);

struct TrainConfig {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.5;
  Index k = 256;
  Index hidden = 256;
  double dropout = 0.5;
  double learning_rate = 0.001;
  Index max_epochs = 300;
  std::uint64_t seed = 0;
  Combinator combinator = Combinator::Sum;
  Mode mode = Mode::Ffp;
  /// Replace Q Q^T with the exact operator solved by power iteration.
  bool exact_propagation = false;
  Index oversample = 10;
  Index power_iters = 7;

  void validate() const;
  SvdOptions svd_options() const { return {seed, oversample, power_iters, 1e-6}; }
};

struct AdamState {
  Matrix m;
  Matrix v;
  Index step = 0;
};

struct AdamHyper {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// theta is Theta (Theta_U in dvffp mode); theta_v is empty unless dvffp.
struct ModelParams {
  Matrix theta;
  Matrix theta_v;
  Matrix omega;
  AdamState theta_state;
  AdamState theta_v_state;
  AdamState omega_state;
};

struct Gradients {
  Matrix theta;
  Matrix theta_v;
  Matrix omega;
};

/// Propagators resolved for one config. Q factors do not depend on the
/// trainable weights, so a plan is built once per training run.
struct PropagationPlan {
  Mode mode = Mode::Ffp;
  double gamma = 0.5;
  Combinator combinator = Combinator::Sum;
  std::optional<Propagator> main;
  std::optional<Propagator> u_view;
  std::optional<Propagator> v_view;

  /// Width of the embedding entering the head.
  Index output_width(Index hidden) const;
};

PropagationPlan make_plan(SvdCache& cache, const TrainConfig& cfg);

/// Inverted dropout mask: entries are 0 or 1/(1 - rate).
Matrix dropout_mask(Index rows, Index cols, double rate, std::mt19937_64& rng);

/// dropout(relu(x theta)); `mask` is omitted at inference.
Matrix feature_transform(const Matrix& x, const Matrix& theta, const Matrix* mask = nullptr);

/// sigmoid(dropout(relu(z)) omega).
Matrix predict(const Matrix& z, const Matrix& omega, const Matrix* mask = nullptr);

/// Mean over `rows` of the per-class binary cross-entropy, summed over classes.
double bce_loss(const Matrix& y_pred, const Matrix& y_true, const std::vector<Index>& rows);

ModelParams init_params(const PropagationPlan& plan, Index input_dim, Index hidden, Index num_classes,
                        std::uint64_t seed);

struct DropoutMasks {
  Matrix theta;
  Matrix theta_v;
  Matrix head;
};

DropoutMasks draw_masks(const PropagationPlan& plan, const ModelParams& params, Index rows, double rate,
                        std::mt19937_64& rng);

/// Intermediate values of one forward pass, kept for backward().
struct ForwardPass {
  Matrix pre_u, h_u;
  Matrix pre_v, h_v;
  Matrix z_u, z_v;  // gamma-scaled view outputs (dvffp)
  Matrix z;
  Matrix a;  // dropout(relu(z)), the head input
  Matrix logits;
  Matrix probs;
};

ForwardPass forward(const PropagationPlan& plan, const ModelParams& params, const Matrix& x,
                    const DropoutMasks* masks = nullptr);

/// Exact gradients of bce_loss(probs, y_true, rows) with respect to every
/// trainable weight, through head, propagation and feature transform.
Gradients backward(const PropagationPlan& plan, const ModelParams& params, const Matrix& x, const ForwardPass& fwd,
                   const Matrix& y_true, const std::vector<Index>& rows, const DropoutMasks* masks = nullptr);

/// One bias-corrected Adam update of `w`; increments state.step first.
void adam_step(Matrix& w, AdamState& state, const Matrix& grad, const AdamHyper& hyper);
void adam_step(ModelParams& params, const Gradients& grads, const AdamHyper& hyper);

enum class Partition { Train = 0, Val = 1, Test = 2 };

/// The only path through which training reads labels. Counts row reads per
/// partition so callers can prove test labels stay unread.
class LabelAccess {
 public:
  LabelAccess(const Matrix& labels, const DataSplit& split);

  /// Full-size label matrix with rows outside `p` zeroed, plus the rows of `p`.
  const std::vector<Index>& rows(Partition p) const;
  Matrix labels(Partition p);
  Index reads(Partition p) const { return reads_[static_cast<int>(p)]; }
  Index num_classes() const { return labels_.cols(); }

 private:
  const Matrix& labels_;
  std::array<std::vector<Index>, 3> rows_;
  std::array<Index, 3> reads_{0, 0, 0};
};

struct EpochRecord {
  Index epoch = 0;
  double train_loss = 0.0;
  double val_auc = 0.0;
  double val_ap = 0.0;
};

struct TrainResult {
  ModelParams params;  // snapshot with the best validation AUC
  Index best_epoch = 0;
  double best_val_auc = 0.0;
  std::vector<EpochRecord> history;
};

/// Full-batch training with dropout; after each epoch the validation AUC is
/// measured and the best snapshot retained. `cache` lets repeated runs share
/// SVDs; `access` lets the caller audit label reads.
TrainResult train(const Eabg& g, const DataSplit& split, const TrainConfig& cfg, SvdCache* cache = nullptr,
                  LabelAccess* access = nullptr);

/// Inference-mode probabilities for every edge.
Matrix predict_all(const PropagationPlan& plan, const ModelParams& params, const Matrix& x);

}  // namespace eagle
