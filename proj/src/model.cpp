#include "eagle/model.hpp"

#include <cmath>
#include <limits>

#include "eagle/kernels.hpp"

namespace eagle {

Mode parse_mode(const std::string& s) {
  if (s == "ffp") return Mode::Ffp;
  if (s == "dvffp") return Mode::DvFfp;
  if (s == "fc") return Mode::Fc;
  throw InputError("unknown mode '" + s + "' (expected ffp, dvffp or fc)");
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Ffp: return "ffp";
    case Mode::DvFfp: return "dvffp";
    case Mode::Fc: return "fc";
  }
  return "?";
}

void TrainConfig::validate() const {
  auto unit_open = [](double x) { return x >= 0.0 && x < 1.0; };
  auto unit_closed = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit_open(alpha)) throw InputError("alpha must lie in [0, 1)");
  if (!unit_closed(beta)) throw InputError("beta must lie in [0, 1]");
  if (!unit_closed(gamma)) throw InputError("gamma must lie in [0, 1]");
  if (!unit_open(dropout)) throw InputError("dropout rate must lie in [0, 1)");
  if (!(learning_rate > 0.0 && learning_rate < 1.0)) throw InputError("learning rate must lie in (0, 1)");
  if (k < 1) throw InputError("k must be positive");
  if (hidden < 1) throw InputError("hidden width must be positive");
  if (max_epochs < 0) throw InputError("max_epochs must be non-negative");
  if (oversample < 0 || power_iters < 0) throw InputError("oversample and power_iters must be non-negative");
}

Index PropagationPlan::output_width(Index hidden) const {
  return mode == Mode::DvFfp && combinator == Combinator::Concat ? 2 * hidden : hidden;
}

PropagationPlan make_plan(SvdCache& cache, const TrainConfig& cfg) {
  cfg.validate();
  PropagationPlan plan;
  plan.mode = cfg.mode;
  plan.gamma = cfg.gamma;
  plan.combinator = cfg.combinator;
  const Index k = std::min<Index>(cfg.k, cache.incidence().e_u.rows());
  auto build = [&](const View& view) {
    if (cfg.exact_propagation) return Propagator::exact(cache.incidence(), view, cfg.alpha);
    return Propagator::factorized(cache.q(view, cfg.alpha, k, cfg.svd_options()));
  };
  switch (cfg.mode) {
    case Mode::Ffp: plan.main = build(View::combined(cfg.beta)); break;
    case Mode::DvFfp:
      plan.u_view = build(View::u_side());
      plan.v_view = build(View::v_side());
      break;
    case Mode::Fc: break;
  }
  return plan;
}

Matrix dropout_mask(Index rows, Index cols, double rate, std::mt19937_64& rng) {
  const double keep = 1.0 - rate;
  const double scale = 1.0 / keep;
  Matrix m(rows, cols);
  // Raw 53-bit draws keep masks identical across standard libraries.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      m(i, j) = u < keep ? scale : 0.0;
    }
  return m;
}

Matrix feature_transform(const Matrix& x, const Matrix& theta, const Matrix* mask) {
  require_dims(x.cols() == theta.rows(), "feature_transform: x columns != theta rows");
  Matrix h = kernels::relu(kernels::gemm(x, theta));
  if (mask) {
    require_dims(mask->rows() == h.rows() && mask->cols() == h.cols(), "feature_transform: mask shape");
    h.array() *= mask->array();
  }
  return h;
}

namespace {

Matrix head_input(const Matrix& z, const Matrix* mask) {
  Matrix a = kernels::relu(z);
  if (mask) {
    require_dims(mask->rows() == a.rows() && mask->cols() == a.cols(), "predict: mask shape");
    a.array() *= mask->array();
  }
  return a;
}

constexpr double kProbClamp = 1e-12;

}  // namespace

Matrix predict(const Matrix& z, const Matrix& omega, const Matrix* mask) {
  require_dims(z.cols() == omega.rows(), "predict: embedding width != omega rows");
  return kernels::sigmoid(kernels::gemm(head_input(z, mask), omega));
}

double bce_loss(const Matrix& y_pred, const Matrix& y_true, const std::vector<Index>& rows) {
  require_dims(y_pred.rows() == y_true.rows() && y_pred.cols() == y_true.cols(), "bce_loss: shape mismatch");
  if (rows.empty()) throw InputError("bce_loss: empty labeled-edge mask");
  double total = 0.0;
  for (Index r : rows) {
    for (Index j = 0; j < y_pred.cols(); ++j) {
      const double p = std::clamp(y_pred(r, j), kProbClamp, 1.0 - kProbClamp);
      const double y = y_true(r, j);
      total += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
  }
  return -total / static_cast<double>(rows.size());
}

namespace {

Matrix fan_in_uniform(Index rows, Index cols, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
  Matrix w(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) w(i, j) = bound * (2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0);
  return w;
}

AdamState zero_state(const Matrix& w) { return {Matrix::Zero(w.rows(), w.cols()), Matrix::Zero(w.rows(), w.cols()), 0}; }

}  // namespace

ModelParams init_params(const PropagationPlan& plan, Index input_dim, Index hidden, Index num_classes,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ModelParams p;
  p.theta = fan_in_uniform(input_dim, hidden, rng);
  if (plan.mode == Mode::DvFfp) p.theta_v = fan_in_uniform(input_dim, hidden, rng);
  p.omega = fan_in_uniform(plan.output_width(hidden), num_classes, rng);
  p.theta_state = zero_state(p.theta);
  p.theta_v_state = zero_state(p.theta_v);
  p.omega_state = zero_state(p.omega);
  return p;
}

DropoutMasks draw_masks(const PropagationPlan& plan, const ModelParams& params, Index rows, double rate,
                        std::mt19937_64& rng) {
  DropoutMasks m;
  m.theta = dropout_mask(rows, params.theta.cols(), rate, rng);
  if (plan.mode == Mode::DvFfp) m.theta_v = dropout_mask(rows, params.theta_v.cols(), rate, rng);
  m.head = dropout_mask(rows, params.omega.rows(), rate, rng);
  return m;
}

ForwardPass forward(const PropagationPlan& plan, const ModelParams& params, const Matrix& x,
                    const DropoutMasks* masks) {
  ForwardPass f;
  f.pre_u = kernels::gemm(x, params.theta);
  f.h_u = kernels::relu(f.pre_u);
  if (masks) f.h_u.array() *= masks->theta.array();
  switch (plan.mode) {
    case Mode::Fc: f.z = f.h_u; break;
    case Mode::Ffp: f.z = plan.main->apply(f.h_u); break;
    case Mode::DvFfp:
      f.pre_v = kernels::gemm(x, params.theta_v);
      f.h_v = kernels::relu(f.pre_v);
      if (masks) f.h_v.array() *= masks->theta_v.array();
      f.z_u = plan.gamma * plan.u_view->apply(f.h_u);
      f.z_v = (1.0 - plan.gamma) * plan.v_view->apply(f.h_v);
      f.z = combine(f.z_u, f.z_v, plan.combinator);
      break;
  }
  f.a = head_input(f.z, masks ? &masks->head : nullptr);
  f.logits = kernels::gemm(f.a, params.omega);
  f.probs = kernels::sigmoid(f.logits);
  return f;
}

Gradients backward(const PropagationPlan& plan, const ModelParams& params, const Matrix& x, const ForwardPass& fwd,
                   const Matrix& y_true, const std::vector<Index>& rows, const DropoutMasks* masks) {
  require_dims(y_true.rows() == fwd.probs.rows() && y_true.cols() == fwd.probs.cols(), "backward: label shape");
  if (rows.empty()) throw InputError("backward: empty labeled-edge mask");
  const double inv_n = 1.0 / static_cast<double>(rows.size());

  // d loss / d logits = (p - y) / |E_L| on labeled rows.
  Matrix d_logits = Matrix::Zero(fwd.probs.rows(), fwd.probs.cols());
  for (Index r : rows) d_logits.row(r) = (fwd.probs.row(r) - y_true.row(r)) * inv_n;

  Gradients g;
  g.omega = kernels::gemm_tn(fwd.a, d_logits);
  Matrix d_z = kernels::gemm(d_logits, params.omega.transpose());
  d_z.array() *= (fwd.z.array() > 0.0).cast<double>();
  if (masks) d_z.array() *= masks->head.array();

  auto through_transform = [&](Matrix d_h, const Matrix& pre, const Matrix* mask) {
    d_h.array() *= (pre.array() > 0.0).cast<double>();
    if (mask) d_h.array() *= mask->array();
    return kernels::gemm_tn(x, d_h);
  };

  switch (plan.mode) {
    case Mode::Fc: g.theta = through_transform(std::move(d_z), fwd.pre_u, masks ? &masks->theta : nullptr); break;
    case Mode::Ffp:
      g.theta = through_transform(plan.main->apply(d_z), fwd.pre_u, masks ? &masks->theta : nullptr);
      break;
    case Mode::DvFfp: {
      const Index w = fwd.z_u.cols();
      Matrix d_zu, d_zv;
      switch (plan.combinator) {
        case Combinator::Sum:
          d_zu = d_z;
          d_zv = d_z;
          break;
        case Combinator::Max:
          d_zu = Matrix::Zero(d_z.rows(), w);
          d_zv = Matrix::Zero(d_z.rows(), w);
          for (Index i = 0; i < d_z.rows(); ++i)
            for (Index j = 0; j < w; ++j) (fwd.z_v(i, j) > fwd.z_u(i, j) ? d_zv : d_zu)(i, j) = d_z(i, j);
          break;
        case Combinator::Concat:
          d_zu = d_z.leftCols(w);
          d_zv = d_z.rightCols(w);
          break;
      }
      d_zu *= plan.gamma;
      d_zv *= 1.0 - plan.gamma;
      g.theta = through_transform(plan.u_view->apply(d_zu), fwd.pre_u, masks ? &masks->theta : nullptr);
      g.theta_v = through_transform(plan.v_view->apply(d_zv), fwd.pre_v, masks ? &masks->theta_v : nullptr);
      break;
    }
  }
  return g;
}

void adam_step(Matrix& w, AdamState& state, const Matrix& grad, const AdamHyper& hyper) {
  require_dims(w.rows() == grad.rows() && w.cols() == grad.cols(), "adam_step: gradient shape");
  if (state.m.size() != w.size()) state = zero_state(w);
  ++state.step;
  state.m = hyper.beta1 * state.m + (1.0 - hyper.beta1) * grad;
  state.v = hyper.beta2 * state.v + (1.0 - hyper.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.step));
  w.array() -= hyper.lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + hyper.eps);
}

void adam_step(ModelParams& params, const Gradients& grads, const AdamHyper& hyper) {
  adam_step(params.theta, params.theta_state, grads.theta, hyper);
  if (params.theta_v.size() > 0) adam_step(params.theta_v, params.theta_v_state, grads.theta_v, hyper);
  adam_step(params.omega, params.omega_state, grads.omega, hyper);
}

LabelAccess::LabelAccess(const Matrix& labels, const DataSplit& split)
    : labels_(labels), rows_{split.train_idx, split.val_idx, split.test_idx} {
  for (const auto& part : rows_)
    for (Index r : part)
      if (r < 0 || r >= labels.rows()) throw InputError("split index " + std::to_string(r) + " outside label rows");
}

const std::vector<Index>& LabelAccess::rows(Partition p) const { return rows_[static_cast<int>(p)]; }

Matrix LabelAccess::labels(Partition p) {
  const auto& part = rows_[static_cast<int>(p)];
  reads_[static_cast<int>(p)] += static_cast<Index>(part.size());
  Matrix out = Matrix::Zero(labels_.rows(), labels_.cols());
  for (Index r : part) out.row(r) = labels_.row(r);
  return out;
}

Matrix predict_all(const PropagationPlan& plan, const ModelParams& params, const Matrix& x) {
  return forward(plan, params, x, nullptr).probs;
}

TrainResult train(const Eabg& g, const DataSplit& split, const TrainConfig& cfg, SvdCache* cache,
                  LabelAccess* access) {
  cfg.validate();
  if (!g.labels) throw InputError("train: graph has no labels");
  if (split.train_idx.empty() || split.val_idx.empty() || split.test_idx.empty())
    throw InputError("train: split needs non-empty train, validation and test sets");

  std::optional<SvdCache> own_cache;
  if (!cache) cache = &own_cache.emplace(g);
  std::optional<LabelAccess> own_access;
  if (!access) access = &own_access.emplace(*g.labels, split);

  const PropagationPlan plan = make_plan(*cache, cfg);
  const Matrix y_train = access->labels(Partition::Train);
  const Matrix y_val = access->labels(Partition::Val);
  const auto& train_rows = access->rows(Partition::Train);
  const auto& val_rows = access->rows(Partition::Val);

  TrainResult res;
  ModelParams params = init_params(plan, g.dim(), cfg.hidden, g.num_classes(), cfg.seed);
  res.params = params;
  res.best_val_auc = -std::numeric_limits<double>::infinity();

  std::mt19937_64 dropout_rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  const AdamHyper hyper{cfg.learning_rate};
  for (Index epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::optional<DropoutMasks> masks;
    if (cfg.dropout > 0.0) masks = draw_masks(plan, params, g.num_edges(), cfg.dropout, dropout_rng);
    const DropoutMasks* mp = masks ? &*masks : nullptr;
    const ForwardPass fwd = forward(plan, params, g.attrs, mp);
    const double loss = bce_loss(fwd.probs, y_train, train_rows);
    adam_step(params, backward(plan, params, g.attrs, fwd, y_train, train_rows, mp), hyper);

    const MetricReport val = evaluate(predict_all(plan, params, g.attrs), y_val, val_rows);
    res.history.push_back({epoch, loss, val.auc, val.ap});
    if (val.auc > res.best_val_auc) {
      res.best_val_auc = val.auc;
      res.best_epoch = epoch;
      res.params = params;
    }
  }
  return res;
}

}  // namespace eagle
