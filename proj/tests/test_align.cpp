#include <gtest/gtest.h>

#include "support.hpp"

using namespace stresstune;

namespace {

Matrix rot2(double a) {
  Matrix q(2, 2);
  q << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return q;
}

}  // namespace

TEST(Procrustes, IdentityOnSelf) {
  const Configuration x = st_test::random_config(10, 2, 1);
  const auto fit = procrustes_fit(x.points(), x.points(), false);
  EXPECT_LT((fit.map.rotation() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(fit.map.translation().norm(), 1e-12);
  EXPECT_LT(fit.residual, 1e-24);
}

TEST(Procrustes, RecoversQuarterTurnAndShift) {
  const Configuration x = st_test::random_config(12, 2, 2);
  Vector t(2);
  t << 3, -1;
  const RigidMap truth(rot2(M_PI / 2), t, false);
  const auto fit = procrustes_fit(x.points(), truth.apply(x).points(), false);
  EXPECT_LT((fit.map.rotation() - rot2(M_PI / 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((fit.map.translation() - t).norm(), 1e-12);
  EXPECT_LE(fit.residual, 1e-10);
}

TEST(Procrustes, ReflectionFlag) {
  const Configuration x = st_test::random_config(12, 2, 3);
  Matrix mirrored = x.points();
  mirrored.col(0) *= -1;
  const auto strict = procrustes_fit(x.points(), mirrored, false);
  const auto loose = procrustes_fit(x.points(), mirrored, true);
  EXPECT_GT(strict.residual, 1e-3);
  EXPECT_LE(loose.residual, 1e-10);
  EXPECT_GT(strict.map.rotation().determinant(), 0);
  EXPECT_LT(loose.map.rotation().determinant(), 0);
}

TEST(Procrustes, ShapeMismatch) {
  EXPECT_THROW(procrustes_fit(Matrix::Zero(3, 2), Matrix::Zero(4, 2), true), InvalidArgument);
  EXPECT_THROW(procrustes(Configuration(Matrix::Zero(3, 2)), Configuration(Matrix::Zero(3, 3)), true),
               InvalidArgument);
}

TEST(Procrustes, ThreeDimensionalAgainstRandomRotation) {
  const Configuration x = st_test::random_config(20, 3, 4);
  const Matrix q = st_test::random_orthogonal(3, 5);
  Vector t(3);
  t << 0.1, 0.2, -0.3;
  const auto fit = procrustes_fit(x.points(), RigidMap(q, t, false).apply(x).points(), false);
  EXPECT_LT((fit.map.rotation() - q).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(AlignedError, CongruentIsZero) {
  const Configuration x = st_test::random_config(30, 2, 6);
  const RigidMap m(rot2(0.7), Vector::Ones(2), false);
  EXPECT_LE(aligned_error(m.apply(x), x), 1e-18 * 30);
}

TEST(AlignedError, OneDisplacedPoint) {
  const Configuration x = st_test::random_config(200, 2, 7);
  Matrix y = x.points();
  const double delta = 0.05;
  y(17, 0) += delta;
  const double e = aligned_error(Configuration(y), x);
  EXPECT_NEAR(e, delta * delta, 0.1 * delta * delta);
  EXPECT_NEAR(e, st_test::brute_aligned_error_2d(y, x.points()), 1e-9 * delta * delta);
}

TEST(AlignedError, ShrunkCopy) {
  const Configuration x = st_test::random_config(50, 2, 8);
  const Configuration y = x.scaled(0.9);
  EXPECT_GT(aligned_error(y, x), 0);
  EXPECT_NEAR(scale_ratio(y, x), 0.9, 1e-12);
}

TEST(AlignedError, MatchesBruteForceOnNoisyData) {
  const Configuration x = st_test::random_config(40, 2, 9);
  const Matrix y = RigidMap(rot2(2.0), Vector::Zero(2), true).apply(x).points() + 0.05 * st_test::random_matrix(40, 2, 10);
  EXPECT_NEAR(aligned_error(Configuration(y), x), st_test::brute_aligned_error_2d(y, x.points()), 1e-9);
}

TEST(AlignedError, ReportsNormalizedRmse) {
  Matrix x(2, 1), y(2, 1);
  x << 0, 2;
  y << 0, 3;
  const auto r = alignment_report(Configuration(y), Configuration(x));
  EXPECT_NEAR(r.error, 0.5, 1e-12);
  EXPECT_NEAR(r.normalized_rmse, 0.25, 1e-12);
}

TEST(ScaleRatio, Basics) {
  const Configuration x = st_test::random_config(10, 2, 11);
  EXPECT_NEAR(scale_ratio(x, x), 1, 1e-15);
  EXPECT_NEAR(scale_ratio(x.scaled(0.5), x), 0.5, 1e-15);
  EXPECT_THROW(scale_ratio(x, Configuration(Matrix::Ones(10, 2))), DegenerateGeometry);
}
