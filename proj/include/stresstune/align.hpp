#pragma once

#include <cmath>

#include "stresstune/core.hpp"

namespace stresstune {

struct ProcrustesFit {
  RigidMap map;
  double residual;  // sum_i ||Q s_i + t - t_i||^2
};

/// Orthogonal Procrustes: the rigid map (optionally with reflection) taking
/// `source` closest to `target` in summed squared distance.
inline ProcrustesFit procrustes_fit(const Matrix& source, const Matrix& target, bool allow_reflection) {
  if (source.rows() != target.rows() || source.cols() != target.cols())
    throw InvalidArgument("procrustes: source and target shapes differ");
  if (source.rows() < 1) throw InvalidArgument("procrustes: empty point sets");
  const Index p = source.cols();
  const Eigen::RowVectorXd sc = source.colwise().mean(), tc = target.colwise().mean();
  const Matrix s0 = source.rowwise() - sc, t0 = target.rowwise() - tc;
  const Matrix h = s0.transpose() * t0;  // p x p cross-covariance
  Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix v = svd.matrixV();
  const Matrix& u = svd.matrixU();
  if (!allow_reflection && (v * u.transpose()).determinant() < 0) v.col(p - 1) *= -1.0;
  Matrix q = v * u.transpose();
  // Re-orthogonalize to wash out SVD rounding before the RigidMap check.
  Eigen::JacobiSVD<Matrix> clean(q, Eigen::ComputeFullU | Eigen::ComputeFullV);
  q = clean.matrixU() * clean.matrixV().transpose();
  const Vector t = tc.transpose() - q * sc.transpose();
  RigidMap map(std::move(q), t, allow_reflection);
  const double residual = (map.apply_rows(source) - target).squaredNorm();
  return {std::move(map), residual};
}

inline RigidMap procrustes(const Configuration& source, const Configuration& target, bool allow_reflection) {
  if (source.size() != target.size() || source.dim() != target.dim())
    throw InvalidArgument("procrustes: configurations differ in size or dimension");
  return procrustes_fit(source.points(), target.points(), allow_reflection).map;
}

struct AlignmentReport {
  double error;            // min over rigid maps (with reflection) of sum ||y_i - T x_i||^2
  double normalized_rmse;  // sqrt(error / n) / diameter(X)
  RigidMap map;            // the minimizing T, applied to X
};

inline AlignmentReport alignment_report(const Configuration& y, const Configuration& x) {
  if (y.size() != x.size() || y.dim() != x.dim())
    throw InvalidArgument("aligned_error: configurations differ in size or dimension");
  ProcrustesFit fit = procrustes_fit(x.points(), y.points(), true);
  const double diam = diameter(x);
  const double rmse = std::sqrt(fit.residual / static_cast<double>(x.size()));
  return {fit.residual, diam > 0 ? rmse / diam : rmse, std::move(fit.map)};
}

/// Aligned embedding error: min_T sum_i ||y_i - T x_i||^2 over orthogonal-plus-translation T.
inline double aligned_error(const Configuration& y, const Configuration& x) { return alignment_report(y, x).error; }

/// RMS distance to centroid of Y over that of X; below 1 means Y is shrunk.
inline double scale_ratio(const Configuration& y, const Configuration& x) {
  if (y.size() != x.size()) throw InvalidArgument("scale_ratio: size mismatch");
  if (x.size() < 2) throw InvalidArgument("scale_ratio: need at least two points");
  auto rms = [](const Configuration& c) {
    const Matrix centered = c.points().rowwise() - c.points().colwise().mean();
    return std::sqrt(centered.rowwise().squaredNorm().mean());
  };
  const double rx = rms(x);
  if (rx == 0) throw DegenerateGeometry("scale_ratio: reference configuration is a single repeated point");
  return rms(y) / rx;
}

}  // namespace stresstune
