#include <gtest/gtest.h>

#include "support.hpp"

using namespace stresstune;

namespace {

DissimilarityGraph path_graph(Index n) {
  std::vector<Edge> e;
  for (Index v = 0; v + 1 < n; ++v) e.push_back({v, v + 1, 1.0});
  return DissimilarityGraph(n, e);
}

Patch patch_from(const std::vector<Index>& members, const Matrix& local) {
  HopNeighborhood nb{members.front(), 1, members};
  Matrix d = st_test::naive_distances(local);
  return Patch{nb, DenseSymmetricMatrix(d), Configuration(local)};
}

double patch_stress_per_edge(const DissimilarityGraph& g, const Patch& patch) {
  const auto sub = g.induced_subgraph(patch.neighborhood.members);
  return stress_per_edge(sub, patch.local_embedding);
}

}  // namespace

TEST(BuildPatch, SaturatedEqualsMdsD) {
  const Configuration x = st_test::jittered_grid(6, 1);
  const auto g = apply_multiplicative_noise(knn_graph(x, 5), 0.05, 2);
  const Patch patch = build_patch(g, 0, 100, 2, false);
  ASSERT_EQ(patch.neighborhood.size(), 36u);
  EXPECT_LT((patch.local_embedding.points() - mds_d(g, 2).points()).cwiseAbs().maxCoeff(), 1e-12);
  const Patch refined = build_patch(g, 0, 100, 2, true);
  EXPECT_LT((refined.local_embedding.points() - smacof_refine(g, mds_d(g, 2)).points()).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(BuildPatch, StarGraphReproducesLocalDistances) {
  Matrix x(6, 2);
  x << 0, 0, 1, 0.2, -0.3, 1, -1, -0.4, 0.5, -1.1, 0.1, 0.9;
  std::vector<Edge> edges;
  for (Index v = 1; v < 6; ++v) edges.push_back({0, v, (x.row(0) - x.row(v)).norm()});
  const DissimilarityGraph g(6, edges);
  const Patch patch = build_patch(g, 0, 1, 2, true, SmacofOptions{2000, 1e-12});
  const auto sub = g.induced_subgraph(patch.neighborhood.members);
  for (const auto& e : sub.edges())
    EXPECT_NEAR((patch.local_embedding.point(e.i) - patch.local_embedding.point(e.j)).norm(), e.d, 1e-4);
}

TEST(BuildPatch, SmallPatchesFitBetterOnHollowDomain) {
  const auto shape = DomainShape::make(ShapeKind::hollow_rectangle);
  const Configuration x = generate_shape(shape, 400, presets::kJitterFraction, 3);
  const auto g = apply_multiplicative_noise(knn_graph(x, 15), 0.15, 4);
  double small = 0;
  const Index centers[] = {0, 50, 100, 150, 200, 250, 300, 350};
  for (Index v : centers) small += patch_stress_per_edge(g, build_patch(g, v, 2, 2, false));
  small /= 8;
  const double whole = patch_stress_per_edge(g, build_patch(g, 0, 15, 2, false));
  EXPECT_LT(small, whole);
}

TEST(BuildPatch, Errors) {
  EXPECT_THROW(build_patch(path_graph(4), 0, 1, 2, false), PatchError);
  const DissimilarityGraph g(4, {{0, 1, 1.0}, {2, 3, 1.0}, {1, 2, 1.0}});
  EXPECT_THROW(build_patch(g, HopNeighborhood{0, 1, {0, 1, 3}}, 1, false), PatchError);
}

TEST(GlobalMap, IdenticalPatchLeavesMapUnchanged) {
  const Matrix local = st_test::random_matrix(5, 2, 1);
  const Patch patch = patch_from({0, 1, 2, 3, 4}, local);
  GlobalMap gm = GlobalMap::seeded(5, patch);
  const Configuration before = gm.to_configuration();
  gm.merge(patch);
  EXPECT_EQ(gm.to_configuration().points(), before.points());
  ASSERT_EQ(gm.merge_log().size(), 2u);
  EXPECT_EQ(gm.merge_log()[1].overlap, 5u);
}

TEST(GlobalMap, RotatedPatchPlacesNewNodeExactly) {
  const Matrix base = st_test::random_matrix(6, 2, 2);
  GlobalMap gm = GlobalMap::seeded(6, patch_from({0, 1, 2, 3, 4}, base.topRows(5)));
  Matrix q(2, 2);
  q << 0, -1, 1, 0;
  const Matrix rotated = base * q.transpose();
  gm = merge(gm, patch_from({0, 1, 2, 3, 4, 5}, rotated));
  EXPECT_LT((gm.point(5) - base.row(5)).norm(), 1e-12);
  EXPECT_EQ(gm.placed_count(), 6);
}

TEST(GlobalMap, TwoPatchesOfASquare) {
  const Configuration x = st_test::jittered_grid(4, 3, 0.1);
  std::vector<Index> left, right;
  for (Index i = 0; i < 16; ++i) {
    if (x.point(i)(0) < 2.5) left.push_back(i);
    if (x.point(i)(0) > 0.5) right.push_back(i);
  }
  auto local = [&](const std::vector<Index>& m, std::uint64_t seed) {
    const Matrix pts = x.select(m).points();
    const RigidMap t(st_test::random_orthogonal(2, seed, false), Vector::Ones(2) * static_cast<double>(seed), true);
    return patch_from(m, t.apply_rows(pts));
  };
  GlobalMap gm = GlobalMap::seeded(16, local(left, 5));
  gm.merge(local(right, 6));
  const Matrix got = st_test::naive_distances(gm.to_configuration().points());
  EXPECT_LT((got - st_test::naive_distances(x.points())).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(GlobalMap, RefusesSmallOrDegenerateOverlap) {
  Matrix a(3, 2);
  a << 0, 0, 1, 0, 0, 1;
  GlobalMap gm = GlobalMap::seeded(6, patch_from({0, 1, 2}, a));
  Matrix b(4, 2);
  b << 1, 0, 0, 1, 5, 5, 6, 6;
  EXPECT_THROW(gm.merge(patch_from({1, 2, 3, 4}, b)), PatchError);

  Matrix line(4, 2);
  line << 0, 0, 1, 0, 2, 0, 0, 1;
  GlobalMap gl = GlobalMap::seeded(5, patch_from({0, 1, 2, 3}, line));
  Matrix c(4, 2);
  c << 0, 0, 1, 0, 2, 0, 1, 1;
  EXPECT_THROW(gl.merge(patch_from({0, 1, 2, 4}, c)), PatchError);
  EXPECT_THROW(gl.to_configuration(), PatchError);
}

TEST(PlanMergeOrder, SeedIsLargestLowestIndex) {
  std::vector<HopNeighborhood> hoods{{0, 1, {0, 1, 2}}, {1, 1, {0, 1, 2, 3}}, {2, 1, {1, 2, 3, 4}}, {3, 1, {2, 3, 4}}};
  const auto plan = plan_merge_order(hoods, 5, 2);
  ASSERT_EQ(plan.size(), 2u);
  EXPECT_EQ(plan[0].center, 1);
  EXPECT_EQ(plan[1].center, 2);
  EXPECT_EQ(plan[1].overlap, 3u);
}

TEST(MdsMapP, RealizableCompleteGraphExact) {
  const Configuration x = st_test::random_config(25, 2, 4);
  const auto g = st_test::complete_graph(x);
  for (int h : {1, 2}) {
    const auto y = mds_map_p(g, h, 2, false, false);
    EXPECT_LE(aligned_error(y, x), 1e-6 * diameter(x));
  }
}

TEST(MdsMapP, SaturatedEqualsMdsDUpToRigidMap) {
  const Configuration x = st_test::jittered_grid(7, 5);
  const auto g = apply_multiplicative_noise(knn_graph(x, 6), 0.1, 6);
  const auto a = mds_map_p(g, 50, 2, false, false);
  const auto b = mds_d(g, 2);
  EXPECT_LE(aligned_error(a, b), 1e-9 * diameter(b));
}

TEST(MdsMapP, MergeLogDeterministic) {
  const Configuration x = st_test::jittered_grid(8, 7);
  const auto g = apply_multiplicative_noise(knn_graph(x, 8), 0.1, 8);
  const auto a = mds_map_p_detailed(g, 2, 2);
  const auto b = mds_map_p_detailed(g, 2, 2);
  ASSERT_EQ(a.merge_log.size(), b.merge_log.size());
  for (std::size_t k = 0; k < a.merge_log.size(); ++k) {
    EXPECT_EQ(a.merge_log[k].center, b.merge_log[k].center);
    EXPECT_EQ(a.merge_log[k].overlap, b.merge_log[k].overlap);
  }
  EXPECT_EQ(a.embedding.points(), b.embedding.points());
}

TEST(MdsMapP, ThreadCountDoesNotChangeOutput) {
  const Configuration x = st_test::jittered_grid(8, 9);
  const auto g = apply_multiplicative_noise(knn_graph(x, 8), 0.1, 10);
  MdsMapOptions one, four;
  one.threads = 1;
  four.threads = 4;
  EXPECT_EQ(mds_map_p_detailed(g, 2, 2, one).embedding.points(), mds_map_p_detailed(g, 2, 2, four).embedding.points());
}

TEST(MdsMapP, UncoveredNodesReported) {
  try {
    mds_map_p(path_graph(6), 1, 2, false, false);
    FAIL() << "expected PatchError";
  } catch (const PatchError& e) {
    EXPECT_NE(std::string(e.what()).find("uncovered"), std::string::npos);
  }
}

TEST(MdsMapP, Preconditions) {
  EXPECT_THROW(mds_map_p(DissimilarityGraph(4, {{0, 1, 1.0}}), 1, 2), DisconnectedGraph);
  EXPECT_THROW(mds_map_p(path_graph(4), 0, 1), InvalidArgument);
}

TEST(MdsMapP, FinalRefineDoesNotIncreaseEdgeStress) {
  const Configuration x = st_test::jittered_grid(8, 11);
  const auto g = apply_multiplicative_noise(knn_graph(x, 8), 0.1, 12);
  const auto plain = mds_map_p(g, 2, 2, false, false);
  const auto refined = mds_map_p(g, 2, 2, false, true);
  EXPECT_LE(unsquared_stress(g, refined), unsquared_stress(g, plain));
}
