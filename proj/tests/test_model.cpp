#include <gtest/gtest.h>

#include "eagle/datagen.hpp"
#include "eagle/model.hpp"
#include "gradcheck.hpp"
#include "test_util.hpp"

using namespace eagle;
using eagle::testing::random_graph;
using eagle::testing::random_matrix;

namespace {

Eabg small_task() {
  SyntheticSpec s;
  s.num_u = 40;
  s.num_v = 20;
  s.num_edges = 400;
  s.dim = 8;
  s.num_classes = 2;
  s.structure_signal = 1.0;
  s.noise = 0.0;
  s.seed = 3;
  return gen_synthetic(s);
}

TrainConfig small_config(Mode mode) {
  TrainConfig c;
  c.mode = mode;
  c.k = 32;
  c.hidden = 16;
  c.max_epochs = 10;
  c.learning_rate = 0.01;
  c.seed = 5;
  return c;
}

}  // namespace

TEST(FeatureTransform, Examples) {
  Matrix x = random_matrix(6, 4, 1).cwiseAbs();
  EXPECT_EQ(feature_transform(x, Matrix::Identity(4, 4)), x);
  EXPECT_EQ(feature_transform(x, -Matrix::Ones(4, 3)), Matrix::Zero(6, 3));
}

TEST(FeatureTransform, DropoutIsUnbiased) {
  const Matrix x = random_matrix(5, 4, 2), theta = random_matrix(4, 3, 3);
  const Matrix h = feature_transform(x, theta);
  std::mt19937_64 rng(9);
  Matrix sum = Matrix::Zero(5, 3);
  for (int i = 0; i < 10000; ++i) {
    const Matrix mask = dropout_mask(5, 3, 0.5, rng);
    sum += feature_transform(x, theta, &mask);
  }
  EXPECT_LE((sum / 10000.0 - h).norm(), 0.02 * h.norm());
}

TEST(Predict, Examples) {
  const Matrix z = random_matrix(4, 3, 4);
  EXPECT_EQ(predict(z, Matrix::Zero(3, 2)), Matrix::Constant(4, 2, 0.5));
  Matrix onehot = Matrix::Zero(1, 3);
  onehot(0, 1) = 1.0;
  Matrix omega = Matrix::Zero(3, 2);
  omega(1, 0) = 10.0;
  EXPECT_NEAR(predict(onehot, omega)(0, 0), 0.9999546, 1e-7);
  const Matrix p = predict(random_matrix(50, 3, 5) * 20.0, random_matrix(3, 4, 6));
  EXPECT_GT(p.minCoeff(), 0.0);
  EXPECT_LT(p.maxCoeff(), 1.0);
}

TEST(BceLoss, Examples) {
  Matrix y(3, 2);
  y << 1, 0, 0, 1, 1, 1;
  EXPECT_LE(bce_loss(y, y, {0, 1, 2}), 2 * 1e-11);
  EXPECT_NEAR(bce_loss(Matrix::Constant(3, 2, 0.5), y, {0, 1, 2}), 2 * std::log(2.0), 1e-15);
}

TEST(BceLoss, MatchesScalarLoop) {
  const Matrix p = (random_matrix(20, 3, 7).array() * 0.49 + 0.5).matrix();
  Matrix y = Matrix::Zero(20, 3);
  for (Index i = 0; i < 20; ++i) y(i, i % 3) = 1.0;
  const std::vector<Index> rows{0, 3, 4, 9, 15};
  double total = 0;
  for (Index r : rows)
    for (Index c = 0; c < 3; ++c) total -= y(r, c) * std::log(p(r, c)) + (1 - y(r, c)) * std::log(1 - p(r, c));
  EXPECT_NEAR(bce_loss(p, y, rows), total / 5.0, 1e-12);
}

TEST(Backward, ZeroUpstreamGivesZeroGradients) {
  const Eabg g = random_graph(4, 12, 4, 4, 3, 2);
  SvdCache cache(g);
  TrainConfig cfg = small_config(Mode::Ffp);
  cfg.k = 12;
  const PropagationPlan plan = make_plan(cache, cfg);
  const ModelParams p = init_params(plan, 3, 5, 2, 1);
  const ForwardPass f = forward(plan, p, g.attrs);
  const Gradients gr = backward(plan, p, g.attrs, f, f.probs, {0, 1, 2, 3});
  EXPECT_EQ(gr.theta, Matrix::Zero(3, 5));
  EXPECT_EQ(gr.omega, Matrix::Zero(5, 2));
}

TEST(Backward, DeadReluColumnHasZeroGradient) {
  Eabg g = random_graph(5, 12, 4, 4, 3, 2);
  g.attrs = g.attrs.cwiseAbs();
  SvdCache cache(g);
  TrainConfig cfg = small_config(Mode::Ffp);
  cfg.k = 12;
  const PropagationPlan plan = make_plan(cache, cfg);
  ModelParams p = init_params(plan, 3, 4, 2, 2);
  p.theta.col(0) = -p.theta.col(0).cwiseAbs() - Vector::Constant(3, 0.1);
  const Gradients gr = backward(plan, p, g.attrs, forward(plan, p, g.attrs), *g.labels, {0, 1, 2, 3, 4});
  EXPECT_EQ(gr.theta.col(0), Vector::Zero(3));
  EXPECT_GT(gr.theta.cwiseAbs().sum(), 0.0);
}

TEST(Backward, FiniteDifferencesAllModes) {
  const Eabg g = random_graph(7, 10, 4, 3, 4, 3);
  const std::vector<Index> rows{0, 2, 3, 5, 6, 8, 9};
  for (Mode mode : {Mode::Fc, Mode::Ffp, Mode::DvFfp})
    for (Combinator comb : {Combinator::Sum, Combinator::Max, Combinator::Concat}) {
      if (mode != Mode::DvFfp && comb != Combinator::Sum) continue;
      SvdCache cache(g);
      TrainConfig cfg = small_config(mode);
      cfg.k = 6;
      cfg.combinator = comb;
      cfg.gamma = 0.3;
      const PropagationPlan plan = make_plan(cache, cfg);
      const ModelParams p = init_params(plan, 4, 5, 3, 11);
      const auto res = eagle::testing::check_gradients(plan, p, g.attrs, *g.labels, rows);
      EXPECT_LT(res.max_rel_error, 1e-4) << to_string(mode) << "/" << to_string(comb);
    }
}

TEST(Adam, ZeroGradientLeavesWeights) {
  Matrix w = random_matrix(3, 3, 1);
  const Matrix before = w;
  AdamState s;
  adam_step(w, s, Matrix::Zero(3, 3), {});
  EXPECT_EQ(w, before);
  EXPECT_EQ(s.step, 1);
}

TEST(Adam, FirstStepIsSignedLearningRate) {
  Matrix w = Matrix::Zero(2, 2), g(2, 2);
  g << 3.0, -0.02, 1e-3, -50.0;
  AdamState s;
  adam_step(w, s, g, {.lr = 0.01});
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(w.data()[i], -0.01 * (g.data()[i] > 0 ? 1 : -1), 1e-7);
}

TEST(Adam, SecondIdenticalStepNoLarger) {
  Matrix w = Matrix::Zero(1, 3), g(1, 3);
  g << 0.5, -2.0, 1e-4;
  AdamState s;
  adam_step(w, s, g, {});
  const Matrix first = w;
  adam_step(w, s, g, {});
  const Matrix second = w - first;
  for (Index j = 0; j < 3; ++j) EXPECT_LE(std::abs(second(0, j)), std::abs(first(0, j)) + 1e-18);
}

TEST(Init, FanInBound) {
  PropagationPlan plan;
  plan.mode = Mode::Fc;
  const ModelParams p = init_params(plan, 16, 8, 3, 1);
  EXPECT_LE(p.theta.cwiseAbs().maxCoeff(), 0.25);
  EXPECT_LE(p.omega.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(8.0));
  EXPECT_EQ(p.theta_v.size(), 0);
}

TEST(Train, ZeroEpochsReturnsInit) {
  const Eabg g = small_task();
  TrainConfig cfg = small_config(Mode::Ffp);
  cfg.max_epochs = 0;
  const TrainResult r = train(g, make_split(g, {0.8, 0.1, 0.1}, 1), cfg);
  SvdCache cache(g);
  const ModelParams init = init_params(make_plan(cache, cfg), g.dim(), cfg.hidden, g.num_classes(), cfg.seed);
  EXPECT_EQ(r.params.theta, init.theta);
  EXPECT_EQ(r.params.omega, init.omega);
  EXPECT_TRUE(r.history.empty());
}

TEST(Train, LossDecreasesOnSeparableTask) {
  const Eabg g = small_task();
  for (Mode mode : {Mode::Ffp, Mode::DvFfp, Mode::Fc}) {
    TrainConfig cfg = small_config(mode);
    cfg.dropout = 0.0;
    const TrainResult r = train(g, make_split(g, {0.8, 0.1, 0.1}, 1), cfg);
    ASSERT_EQ(r.history.size(), 10u);
    for (std::size_t i = 1; i < r.history.size(); ++i)
      EXPECT_LT(r.history[i].train_loss, r.history[i - 1].train_loss) << to_string(mode) << " epoch " << i + 1;
  }
}

TEST(Train, DeterministicAndNeverReadsTestLabels) {
  const Eabg g = small_task();
  const DataSplit split = make_split(g, {0.8, 0.1, 0.1}, 2);
  const TrainConfig cfg = small_config(Mode::DvFfp);
  LabelAccess access(*g.labels, split);
  const TrainResult a = train(g, split, cfg, nullptr, &access);
  const TrainResult b = train(g, split, cfg);
  EXPECT_EQ(access.reads(Partition::Test), 0);
  EXPECT_GT(access.reads(Partition::Train), 0);
  EXPECT_GT(access.reads(Partition::Val), 0);
  EXPECT_EQ(a.params.theta, b.params.theta);
  EXPECT_EQ(a.params.theta_v, b.params.theta_v);
  EXPECT_EQ(a.params.omega, b.params.omega);
  EXPECT_EQ(a.best_epoch, b.best_epoch);
  EXPECT_GE(a.best_epoch, 1);
}

TEST(Train, DualViewReusesCachedFactors) {
  const Eabg g = small_task();
  const DataSplit split = make_split(g, {0.8, 0.1, 0.1}, 3);
  SvdCache cache(g);
  TrainConfig cfg = small_config(Mode::DvFfp);
  cfg.max_epochs = 2;
  train(g, split, cfg, &cache);
  EXPECT_EQ(cache.svd_count(), 2);
  cfg.gamma = 0.8;
  cfg.combinator = Combinator::Max;
  train(g, split, cfg, &cache);
  cfg.combinator = Combinator::Concat;
  cfg.alpha = 0.2;
  train(g, split, cfg, &cache);
  EXPECT_EQ(cache.svd_count(), 2);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.alpha = 1.0;
  EXPECT_THROW(c.validate(), InputError);
  c = {};
  c.dropout = 1.0;
  EXPECT_THROW(c.validate(), InputError);
  EXPECT_EQ(parse_mode("dvffp"), Mode::DvFfp);
  EXPECT_THROW(parse_mode("gcn"), InputError);
}
