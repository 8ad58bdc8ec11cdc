#include <gtest/gtest.h>

#include "support.hpp"

using namespace stresstune;

namespace {

double stress_oracle(const DissimilarityGraph& g, const Matrix& y) {
  double s = 0;
  for (const auto& e : g.edges()) {
    double sq = 0;
    for (Index c = 0; c < y.cols(); ++c) sq += (y(e.i, c) - y(e.j, c)) * (y(e.i, c) - y(e.j, c));
    s += (sq - e.d * e.d) * (sq - e.d * e.d);
  }
  return s;
}

}  // namespace

TEST(Stress, ExactRealizationIsZero) {
  const Configuration x = st_test::random_config(20, 2, 1);
  EXPECT_LT(stress(knn_graph(x, 4), x), 1e-25);
}

TEST(Stress, SingleEdge) {
  const DissimilarityGraph g(2, {{0, 1, 1.0}});
  Matrix y(2, 1);
  y << 0, 2;
  EXPECT_DOUBLE_EQ(stress(g, Configuration(y)), 9);
  EXPECT_DOUBLE_EQ(stress_per_edge(g, Configuration(y)), 9);
}

TEST(Stress, MatchesDirectSummation) {
  const Configuration x = st_test::random_config(30, 2, 2);
  const auto g = apply_multiplicative_noise(knn_graph(x, 5), 0.2, 3);
  const Configuration y = st_test::random_config(30, 2, 4);
  EXPECT_NEAR(stress(g, y), stress_oracle(g, y.points()), 1e-12 * stress_oracle(g, y.points()));
  EXPECT_THROW(stress(g, st_test::random_config(29, 2, 5)), InvalidArgument);
}

TEST(UnsquaredStress, SingleEdge) {
  const DissimilarityGraph g(2, {{0, 1, 1.0}});
  Matrix y(2, 1);
  y << 0, 2;
  EXPECT_DOUBLE_EQ(unsquared_stress(g, Configuration(y)), 1);
}

TEST(NoiselessStress, Cases) {
  const Configuration x = st_test::random_config(25, 2, 6);
  const auto g = knn_graph(x, 5);
  const RigidMap m(st_test::random_orthogonal(2, 7), Vector::Ones(2), false);
  EXPECT_LT(noiseless_stress(g, m.apply(x), x), 1e-24);
  const Configuration y = st_test::random_config(25, 2, 8);
  EXPECT_DOUBLE_EQ(noiseless_stress(g, y, x), stress(g, y));
  const auto noisy = apply_multiplicative_noise(g, 0.1, 9);
  double expect = 0;
  for (const auto& e : g.edges()) {
    const double r = (y.point(e.i) - y.point(e.j)).squaredNorm() - (x.point(e.i) - x.point(e.j)).squaredNorm();
    expect += r * r;
  }
  EXPECT_NEAR(noiseless_stress(noisy, y, x), expect, 1e-12 * expect);
}

TEST(CompleteNoiselessStress, Cases) {
  const Configuration x = st_test::random_config(15, 2, 10);
  const RigidMap m(st_test::random_orthogonal(2, 11, false), Vector::Zero(2), true);
  EXPECT_LT(complete_noiseless_stress(m.apply(x), x), 1e-24);
  Matrix y = x.points();
  y(3, 1) += 0.2;
  double expect = 0;
  const Matrix dy = st_test::naive_sq_distances(y), dx = st_test::naive_sq_distances(x.points());
  for (Index i = 0; i < 15; ++i)
    for (Index j = i + 1; j < 15; ++j) expect += (dy(i, j) - dx(i, j)) * (dy(i, j) - dx(i, j));
  EXPECT_NEAR(complete_noiseless_stress(Configuration(y), x), expect, 1e-12 * expect);
  EXPECT_NEAR(complete_noiseless_stress(Configuration(y), x),
              noiseless_stress(st_test::complete_graph(x), Configuration(y), x), 1e-12 * expect);
}

TEST(SweepHops, RealizableCompleteGraphTieBreak) {
  const Configuration x = st_test::random_config(20, 2, 12);
  const auto g = st_test::complete_graph(x);
  SweepOptions opt;
  opt.mds.refine_patches = false;
  const auto rep = sweep_hops(g, 2, {2, 1}, x, opt);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[0].h, 1);
  EXPECT_LT(rep.rows[0].stress, 1e-18);
  EXPECT_LT(rep.rows[1].stress, 1e-18);
  EXPECT_EQ(rep.selected_h, rep.rows[0].stress <= rep.rows[1].stress ? 1 : 2);
  EXPECT_LT(*rep.rows[0].embedding_error, 1e-18);
  EXPECT_NEAR(*rep.rows[0].scale_ratio, 1, 1e-9);
}

TEST(SweepHops, TiesGoToSmallestH) {
  // Every patch is the whole graph, so all h give bit-identical embeddings.
  const Configuration x = st_test::random_config(10, 2, 13);
  const auto g = apply_multiplicative_noise(st_test::complete_graph(x), 0.1, 14);
  const auto rep = sweep_hops(g, 2, {3, 1, 2, 2});
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rows[0].stress, rep.rows[2].stress);
  EXPECT_EQ(rep.selected_h, 1);
}

TEST(SweepHops, FailedRowsExcluded) {
  // Two 5-cliques joined by one bridge: at h=1 the second cluster overlaps
  // the first in only two nodes.
  Matrix x = st_test::random_matrix(10, 2, 17, 0, 1);
  x.bottomRows(5).array() += 3;
  std::vector<Edge> e;
  for (Index base : {0, 5})
    for (Index i = base; i < base + 5; ++i)
      for (Index j = i + 1; j < base + 5; ++j) e.push_back({i, j, (x.row(i) - x.row(j)).norm()});
  e.push_back({4, 5, (x.row(4) - x.row(5)).norm()});
  const DissimilarityGraph g(10, e);
  const auto rep = sweep_hops(g, 2, {1, 2});
  EXPECT_TRUE(rep.row(1).failed);
  EXPECT_FALSE(rep.row(1).failure.empty());
  EXPECT_FALSE(rep.row(2).failed);
  EXPECT_EQ(rep.selected_h, 2);
  EXPECT_THROW(rep.row(3), InvalidArgument);
}

TEST(SweepHops, AllFailIsAnError) {
  const DissimilarityGraph g(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  EXPECT_THROW(sweep_hops(g, 2, {1}), PatchError);
  EXPECT_THROW(sweep_hops(g, 2, {}), InvalidArgument);
  EXPECT_THROW(sweep_hops(g, 2, {0}), InvalidArgument);
}

TEST(SweepHops, KeepsEmbeddingsOnRequest) {
  const Configuration x = st_test::jittered_grid(6, 15);
  const auto g = apply_multiplicative_noise(knn_graph(x, 8), 0.1, 16);
  SweepOptions opt;
  opt.keep_embeddings = true;
  const auto rep = sweep_hops(g, 2, {2, 3}, std::nullopt, opt);
  for (const auto& r : rep.rows) {
    ASSERT_TRUE(r.embedding.has_value());
    EXPECT_DOUBLE_EQ(stress(g, *r.embedding), r.stress);
    EXPECT_FALSE(r.embedding_error.has_value());
  }
}
