#include <gtest/gtest.h>

#include <numeric>

#include "eagle/propagate.hpp"
#include "eagle/solvers.hpp"
#include "test_util.hpp"

using namespace eagle;
using eagle::testing::graph_of;
using eagle::testing::naive_transition;
using eagle::testing::random_graph;
using eagle::testing::random_matrix;

namespace {

Matrix dense_view(const Eabg& g, const View& v) {
  switch (v.kind) {
    case View::Kind::U: return naive_transition(g, 1.0);
    case View::Kind::V: return naive_transition(g, 0.0);
    case View::Kind::Combined: break;
  }
  return naive_transition(g, v.beta);
}

}  // namespace

TEST(BuildQ, SingleEdge) {
  const PropagatorQ q = build_q(graph_of({{0, 0}}), 0.5, View::combined(0.5), 1);
  EXPECT_NEAR(q.q(0, 0), 1.0 / std::sqrt(0.5), 1e-12);
  EXPECT_NEAR((q.q * q.q.transpose())(0, 0), 2.0, 1e-12);
}

TEST(BuildQ, AlphaZeroFullRankIsIdentity) {
  const Eabg g = random_graph(4, 25, 6, 7);
  const PropagatorQ q = build_q(g, 0.0, View::combined(0.5), 25);
  EXPECT_LE((q.q * q.q.transpose() - Matrix::Identity(25, 25)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BuildQ, FullRankReproducesInverse) {
  const Eabg g = random_graph(6, 40, 9, 10);
  const PropagatorQ q = build_q(g, 0.5, View::combined(0.5), 40);
  const Matrix inv = (Matrix::Identity(40, 40) - 0.5 * naive_transition(g, 0.5)).inverse();
  EXPECT_LE((q.q * q.q.transpose() - inv).norm(), 1e-8);
  EXPECT_THROW(build_q(g, 0.5, View::combined(0.5), 41), InputError);
  EXPECT_THROW(build_q(g, 1.0, View::combined(0.5), 4), InputError);
}

TEST(PropagateFfp, SingleEdgeNormalized) {
  const PropagatorQ q = build_q(graph_of({{0, 0}}), 0.5, View::combined(0.5), 1);
  EXPECT_NEAR(propagate_ffp(q, Matrix::Constant(1, 1, 2.0)).z(0, 0), 2.0, 1e-12);
}

TEST(PropagateFfp, AlphaZeroIsIdentity) {
  const Eabg g = random_graph(9, 20, 5, 6);
  const Matrix h = random_matrix(20, 3, 1);
  EXPECT_LE((propagate_ffp(build_q(g, 0.0, View::u_side(), 20), h).z - h).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PropagateFfp, FullRankMatchesOracleEveryView) {
  const Eabg g = random_graph(14, 48, 11, 9);
  const Matrix h = random_matrix(48, 4, 2);
  for (const View& v : {View::combined(0.5), View::combined(0.2), View::u_side(), View::v_side()})
    for (double alpha : {0.1, 0.5, 0.9}) {
      const Matrix z = propagate_ffp(build_q(g, alpha, v, 48), h).z;
      EXPECT_LE((z - dense_inverse_solve(dense_view(g, v), alpha, h)).norm(), 1e-8) << v.name() << " " << alpha;
    }
}

TEST(PropagateFfp, RelabelingEquivariance) {
  const Eabg g = random_graph(15, 30, 8, 7);
  std::vector<Index> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(2);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eabg p = g;
  for (Index i = 0; i < 30; ++i) {
    p.edges[i] = g.edges[perm[i]];
    p.attrs.row(i) = g.attrs.row(perm[i]);
  }
  const Matrix a = propagate_ffp(build_q(g, 0.5, View::combined(0.5), 30), g.attrs).z;
  const Matrix b = propagate_ffp(build_q(p, 0.5, View::combined(0.5), 30), p.attrs).z;
  for (Index i = 0; i < 30; ++i) EXPECT_LE((b.row(i) - a.row(perm[i])).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(PropagateFfp, EndpointBetaEqualsSingleView) {
  const Eabg g = random_graph(16, 40, 9, 12);
  SvdCache cache(g);
  const Matrix h = random_matrix(40, 3, 3);
  EXPECT_EQ(propagate_ffp(cache.q(View::combined(1.0), 0.5, 12, {}), h).z,
            propagate_ffp(cache.q(View::u_side(), 0.5, 12, {}), h).z);
  EXPECT_EQ(propagate_ffp(cache.q(View::combined(0.0), 0.5, 12, {}), h).z,
            propagate_ffp(cache.q(View::v_side(), 0.5, 12, {}), h).z);
}

TEST(PropagateDual, GammaOneSumIsUView) {
  const Eabg g = random_graph(17, 30, 6, 8);
  const PropagatorQ qu = build_q(g, 0.5, View::u_side(), 30), qv = build_q(g, 0.5, View::v_side(), 30);
  const Matrix h = random_matrix(30, 2, 4);
  EXPECT_EQ(propagate_dual(qu, qv, h, h, 1.0, Combinator::Sum).z, propagate_ffp(qu, h).z);
}

TEST(PropagateDual, MaxOfEqualOperands) {
  const Eabg g = random_graph(18, 20, 5, 5);
  const PropagatorQ qu = build_q(g, 0.5, View::u_side(), 20);
  PropagatorQ qv = qu;
  qv.view = View::v_side();
  const Matrix h = random_matrix(20, 2, 5);
  const Matrix zu = propagate_ffp(qu, h).z;
  EXPECT_EQ(propagate_dual(qu, qv, h, h, 0.5, Combinator::Max).z, 0.5 * zu);
}

TEST(PropagateDual, PerViewOracles) {
  const Eabg g = random_graph(19, 36, 7, 10);
  const Matrix h = random_matrix(36, 3, 6);
  const PropagatorQ qu = build_q(g, 0.5, View::u_side(), 36), qv = build_q(g, 0.5, View::v_side(), 36);
  EXPECT_LE((propagate_ffp(qu, h).z - dense_inverse_solve(naive_transition(g, 1.0), 0.5, h)).norm(), 1e-8);
  EXPECT_LE((propagate_ffp(qv, h).z - dense_inverse_solve(naive_transition(g, 0.0), 0.5, h)).norm(), 1e-8);
  const Matrix cat = propagate_dual(qu, qv, h, h, 0.3, Combinator::Concat).z;
  EXPECT_EQ(cat.cols(), 6);
  EXPECT_EQ(cat.leftCols(3), 0.3 * propagate_ffp(qu, h).z);
  EXPECT_THROW(propagate_dual(qv, qu, h, h, 0.3, Combinator::Sum), InputError);
  EXPECT_THROW(propagate_dual(qu, qv, h, h, 1.3, Combinator::Sum), InputError);
}

TEST(Combine, MaxTiesAndParse) {
  Matrix a(1, 3), b(1, 3);
  a << 1, -0.0, 2;
  b << 0, 0.0, 3;
  const Matrix m = combine(a, b, Combinator::Max);
  EXPECT_EQ(m(0, 0), 1);
  EXPECT_TRUE(std::signbit(m(0, 1)));
  EXPECT_EQ(m(0, 2), 3);
  EXPECT_EQ(parse_combinator("concat"), Combinator::Concat);
  EXPECT_THROW(parse_combinator("avg"), InputError);
}

TEST(Propagator, ExactMatchesFactorizedAtFullRank) {
  const Eabg g = random_graph(20, 30, 7, 7);
  SvdCache cache(g);
  const Matrix h = random_matrix(30, 2, 7);
  const Propagator f = Propagator::factorized(cache.q(View::combined(0.5), 0.5, 30, {}));
  const Propagator e = Propagator::exact(cache.incidence(), View::combined(0.5), 0.5);
  EXPECT_LE((f.apply(h) - e.apply(h)).norm(), 1e-8);
  EXPECT_EQ(cache.svd_count(), 1);
  cache.q(View::combined(0.5), 0.9, 30, {});
  EXPECT_EQ(cache.svd_count(), 1);
}

TEST(Objective, SingleEdgeZero) {
  const Eabg g = graph_of({{0, 0}});
  EXPECT_EQ(objective_value(g, g.attrs, g.attrs, 0.5, 0.5), 0.0);
}

TEST(Objective, TraceForm) {
  const Eabg g = random_graph(22, 35, 8, 9);
  const Matrix h = random_matrix(35, 3, 8), z = random_matrix(35, 3, 9);
  for (double beta : {0.0, 0.4, 1.0}) {
    const Matrix p = naive_transition(g, beta);
    const double trace =
        0.3 * (z - h).squaredNorm() + 0.7 * (z.transpose() * (Matrix::Identity(35, 35) - p) * z).trace();
    EXPECT_NEAR(objective_value(g, z, h, 0.7, beta), trace, 1e-9);
  }
}

TEST(Objective, OracleIsStationary) {
  const Eabg g = random_graph(23, 30, 6, 8);
  const Matrix h = random_matrix(30, 2, 10);
  const Matrix z = dense_inverse_solve(naive_transition(g, 0.5), 0.5, h);
  const double base = objective_value(g, z, h, 0.5, 0.5);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Index i = static_cast<Index>(rng() % 30), j = static_cast<Index>(rng() % 2);
    for (double eps : {1e-3, -1e-3}) {
      Matrix zp = z;
      zp(i, j) += eps;
      EXPECT_GT(objective_value(g, zp, h, 0.5, 0.5), base);
    }
  }
}
