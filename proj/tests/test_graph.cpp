#include <gtest/gtest.h>

#include <numeric>

#include "eagle/graph.hpp"
#include "test_util.hpp"

using namespace eagle;
using eagle::testing::graph_of;
using eagle::testing::naive_transition;
using eagle::testing::random_graph;

TEST(Incidence, TwoEdgesSharingU) {
  const auto inc = build_incidence(graph_of({{0, 0}, {0, 1}}));
  EXPECT_EQ(inc.e_u.to_dense(), Matrix::Ones(2, 1));
  EXPECT_EQ(inc.deg_u, Vector::Constant(1, 2.0));
  EXPECT_EQ(inc.deg_v, Vector::Ones(2));
}

TEST(Incidence, SingleEdge) {
  const auto inc = build_incidence(graph_of({{0, 0}}));
  EXPECT_EQ(inc.e_u.to_dense(), Matrix::Ones(1, 1));
  EXPECT_EQ(inc.e_v.to_dense(), Matrix::Ones(1, 1));
  EXPECT_EQ(inc.deg_u(0), 1.0);
  EXPECT_EQ(inc.deg_v(0), 1.0);
}

TEST(Incidence, ColumnSumsAreDegrees) {
  const Eabg g = random_graph(3, 50, 12, 9);
  std::vector<double> du(g.num_u, 0), dv(g.num_v, 0);
  for (const auto& e : g.edges) {
    du[e.u] += 1;
    dv[e.v] += 1;
  }
  const auto inc = build_incidence(g);
  const Vector cu = inc.e_u.col_sums(), cv = inc.e_v.col_sums();
  for (Index i = 0; i < g.num_u; ++i) {
    EXPECT_EQ(cu(i), du[i]);
    EXPECT_EQ(inc.deg_u(i), du[i]);
  }
  for (Index i = 0; i < g.num_v; ++i) {
    EXPECT_EQ(cv(i), dv[i]);
    EXPECT_EQ(inc.deg_v(i), dv[i]);
  }
}

TEST(Incidence, RelabelingEquivariance) {
  const Eabg g = random_graph(5, 30, 7, 6);
  std::vector<Index> perm(g.num_edges());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eabg h = g;
  for (Index i = 0; i < g.num_edges(); ++i) {
    h.edges[i] = g.edges[perm[i]];
    h.attrs.row(i) = g.attrs.row(perm[i]);
  }
  const Matrix a = build_incidence(g).e_u.to_dense();
  const Matrix b = build_incidence(h).e_u.to_dense();
  for (Index i = 0; i < g.num_edges(); ++i) EXPECT_EQ(b.row(i), a.row(perm[i]));
}

TEST(Incidence, UnusedNodeRejected) {
  Eabg g = graph_of({{0, 0}, {0, 1}});
  g.num_u = 2;
  EXPECT_THROW(build_incidence(g), DegenerateGraphError);
  EXPECT_THROW(g.validate(), DegenerateGraphError);
}

TEST(Graph, ValidateRejectsBadShapes) {
  Eabg g = graph_of({{0, 0}, {0, 1}});
  g.attrs = Matrix::Ones(3, 1);
  EXPECT_THROW(g.validate(), InputError);
  g = graph_of({{0, 0}});
  g.edges[0].v = 5;
  EXPECT_THROW(g.validate(), InputError);
  g = graph_of({{0, 0}});
  g.attrs(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(g.validate(), InputError);
}

TEST(Graph, CompactionAndDuplicates) {
  const Eabg g = compact_graph({{10, 7}, {3, 7}, {10, 7}}, Matrix::Zero(3, 2));
  EXPECT_EQ(g.num_u, 2);
  EXPECT_EQ(g.num_v, 1);
  EXPECT_EQ(g.edges[1], (Edge{1, 0}));
  EXPECT_EQ(count_duplicate_pairs(g), 1);
}

TEST(Transition, ExampleMatrices) {
  const auto inc = build_incidence(graph_of({{0, 0}, {0, 1}}));
  EXPECT_EQ(transition_u(inc).to_dense(), Matrix::Constant(2, 2, 0.5));
  EXPECT_EQ(transition_v(inc).to_dense(), Matrix::Identity(2, 2));
}

TEST(Transition, DoublyStochasticAndMatchesCounting) {
  const Eabg g = random_graph(11, 40, 9, 13);
  const auto inc = build_incidence(g);
  for (double beta : {0.0, 0.3, 1.0}) {
    const Matrix p = dense_transition(inc, beta);
    EXPECT_LE((p - naive_transition(g, beta)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((p.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_LE((p.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_EQ(p, p.transpose());
    EXPECT_GE(p.minCoeff(), 0.0);
  }
}

TEST(Transition, DenseCap) {
  const auto inc = build_incidence(random_graph(1, 20, 5, 5));
  EXPECT_THROW(dense_transition(inc, 0.5, 10), InputError);
}

TEST(CombinedIncidence, SingleEdgeRow) {
  const Matrix b = combined_incidence(build_incidence(graph_of({{0, 0}})), 0.5).to_dense();
  EXPECT_NEAR(b(0, 0), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(b(0, 1), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(b.row(0).norm(), 1.0, 1e-15);
}

TEST(CombinedIncidence, BetaOneHasZeroRightBlock) {
  const Eabg g = random_graph(2, 25, 6, 8);
  const auto inc = build_incidence(g);
  const Matrix b = combined_incidence(inc, 1.0).to_dense();
  EXPECT_EQ(b.rightCols(g.num_v), Matrix::Zero(g.num_edges(), g.num_v));
  EXPECT_LE((b * b.transpose() - transition_u(inc).to_dense()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CombinedIncidence, GramIsMixture) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Eabg g = random_graph(seed, 10 + 60 * static_cast<Index>(seed), 8, 11);
    const auto inc = build_incidence(g);
    for (double beta : {0.0, 0.3, 0.5, 1.0}) {
      const Matrix b = combined_incidence(inc, beta).to_dense();
      EXPECT_LE((b * b.transpose() - naive_transition(g, beta)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
  EXPECT_THROW(combined_incidence(build_incidence(graph_of({{0, 0}})), 1.5), InputError);
}
