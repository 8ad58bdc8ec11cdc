#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "stresstune/core.hpp"
#include "stresstune/graph.hpp"

namespace stresstune {

/// B = double-centered matrix of a_ij = -d_ij^2 / 2 (the Gram matrix that
/// classical scaling factorizes).
inline DenseSymmetricMatrix scaling_gram(const DenseSymmetricMatrix& d) {
  if (!d.is_complete())
    throw InvalidArgument("classical scaling needs a complete dissimilarity matrix (found +inf entry)");
  Matrix a = -0.5 * d.matrix().array().square().matrix();
  return double_center(DenseSymmetricMatrix(std::move(a)));
}

/// Classical (Torgerson) scaling: rows of U_p * diag(sqrt(max(nu, 0))).
///
/// Each eigenvector's sign is fixed so its largest-magnitude entry is
/// positive, which makes the output reproducible across eigensolver paths.
inline Configuration classical_scaling(const DenseSymmetricMatrix& d, Index p) {
  if (p < 1) throw InvalidArgument("classical_scaling: p must be >= 1");
  const Index n = d.order();
  if (n < 1) throw InvalidArgument("classical_scaling: empty matrix");
  for (Index i = 0; i < n; ++i)
    if (d(i, i) != 0) throw InvalidArgument("classical_scaling: nonzero diagonal");
  if ((d.matrix().array() < 0).any()) throw InvalidArgument("classical_scaling: negative dissimilarity");
  const DenseSymmetricMatrix b = scaling_gram(d);
  const Index q = std::min(p, n);
  const EigenPairs eig = top_eigenpairs(b, q);
  Matrix y = Matrix::Zero(n, p);
  for (Index c = 0; c < q; ++c) {
    Vector u = eig.vectors.col(c);
    Index arg = 0;
    u.cwiseAbs().maxCoeff(&arg);
    if (u(arg) < 0) u = -u;
    y.col(c) = std::sqrt(std::max(eig.values(c), 0.0)) * u;
  }
  return Configuration(std::move(y));
}

/// Raw strain: sum over i<j of (<y_i, y_j> - b_ij)^2.
inline double strain(const Configuration& y, const DenseSymmetricMatrix& b) {
  if (y.size() != b.order()) throw InvalidArgument("strain: configuration and B sizes differ");
  const Matrix gram = y.points() * y.points().transpose();
  double s = 0;
  for (Index i = 0; i < y.size(); ++i)
    for (Index j = i + 1; j < y.size(); ++j) {
      const double r = gram(i, j) - b(i, j);
      s += r * r;
    }
  return s;
}

/// Shortest-path completion followed by classical scaling.
inline Configuration mds_d(const DissimilarityGraph& g, Index p) {
  if (!is_connected(g)) throw DisconnectedGraph("mds_d: graph is disconnected; embed each component separately");
  return classical_scaling(all_pairs_shortest_paths(g), p);
}

// ---------------------------------------------------------------------------
// SMACOF
// ---------------------------------------------------------------------------

struct SmacofOptions {
  int max_iter = 300;
  double tol = 1e-6;  // stop when relative stress decrease falls below this
};

struct SmacofResult {
  Configuration embedding;
  std::vector<double> history;  // stress before the first step, then after each step
  int iterations = 0;
  bool converged = false;
};

/// Sum over edges of (||y_i - y_j|| - d_ij)^2 -- the objective SMACOF majorizes.
inline double smacof_stress(const DissimilarityGraph& g, const Matrix& y) {
  double s = 0;
  for (const auto& e : g.edges()) {
    const double r = (y.row(e.i) - y.row(e.j)).norm() - e.d;
    s += r * r;
  }
  return s;
}

/// Guttman-transform iterations for the unit-weight edge stress
/// sum_{(i,j) in E} (||y_i - y_j|| - d_ij)^2. Non-edges carry zero weight.
/// The output is centered at the origin unless Y0 is returned untouched
/// (zero initial stress).
inline SmacofResult smacof(const DissimilarityGraph& g, const Configuration& y0, const SmacofOptions& opt = {}) {
  const Index n = g.size();
  if (y0.size() != n)
    throw InvalidArgument("smacof: configuration has " + std::to_string(y0.size()) + " points, graph has " +
                          std::to_string(n) + " nodes");
  SmacofResult res{y0, {}, 0, false};
  double total_sq = 0;
  for (const auto& e : g.edges()) total_sq += e.d * e.d;
  double s = smacof_stress(g, y0.points());
  res.history.push_back(s);
  if (n <= 1 || s <= 1e-24 * std::max(total_sq, 1e-300)) {
    res.converged = true;
    return res;
  }
  if (!is_connected(g)) throw DisconnectedGraph("smacof: graph is disconnected");

  // V = graph Laplacian; grounding node 0 leaves a positive definite system.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * g.edge_count());
  for (const auto& e : g.edges()) {
    const Index a = e.i - 1, b = e.j - 1;
    if (a >= 0) trip.emplace_back(a, a, 1.0);
    if (b >= 0) trip.emplace_back(b, b, 1.0);
    if (a >= 0 && b >= 0) {
      trip.emplace_back(a, b, -1.0);
      trip.emplace_back(b, a, -1.0);
    }
  }
  Eigen::SparseMatrix<double> v(n - 1, n - 1);
  v.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(v);
  if (solver.info() != Eigen::Success) throw ConvergenceError("smacof: Laplacian factorization failed");

  const Index p = y0.dim();
  Matrix y = y0.points();
  Matrix r(n, p);
  for (int it = 0; it < opt.max_iter; ++it) {
    r.setZero();
    for (const auto& e : g.edges()) {
      const Eigen::RowVectorXd diff = y.row(e.i) - y.row(e.j);
      const double dist = diff.norm();
      if (dist < 1e-12) continue;
      const double coef = e.d / dist;
      r.row(e.i) += coef * diff;
      r.row(e.j) -= coef * diff;
    }
    Matrix x(n, p);
    x.row(0).setZero();
    x.bottomRows(n - 1) = solver.solve(r.bottomRows(n - 1));
    x.rowwise() -= x.colwise().mean();
    const double s_new = smacof_stress(g, x);
    res.history.push_back(s_new);
    y = std::move(x);
    res.iterations = it + 1;
    const bool small = (s - s_new) < opt.tol * s;
    s = s_new;
    if (small || s_new == 0) {
      res.converged = true;
      break;
    }
  }
  res.embedding = Configuration(std::move(y));
  return res;
}

inline Configuration smacof_refine(const DissimilarityGraph& g, const Configuration& y0, int max_iter = 300,
                                   double tol = 1e-6) {
  return smacof(g, y0, SmacofOptions{max_iter, tol}).embedding;
}

// ---------------------------------------------------------------------------
// Trilateration
// ---------------------------------------------------------------------------

/// Locates one point from its dissimilarities to m >= p+1 landmarks via the
/// inner-product formula y = 1/2 Y^+ (a - d^2), with the landmarks centered
/// first and the centroid added back.
inline Vector trilaterate(const Configuration& landmarks, std::span<const double> d) {
  const Index m = landmarks.size(), p = landmarks.dim();
  if (static_cast<Index>(d.size()) != m) throw InvalidArgument("trilaterate: need one dissimilarity per landmark");
  if (m < p + 1)
    throw InvalidArgument("trilaterate: need at least p+1=" + std::to_string(p + 1) + " landmarks, got " +
                          std::to_string(m));
  const Vector c = landmarks.centroid();
  const Matrix yc = landmarks.points().rowwise() - c.transpose();
  if (numerical_rank(yc) < p) throw DegenerateGeometry("trilaterate: landmarks do not span R^p affinely");
  Vector rhs(m);
  for (Index j = 0; j < m; ++j) {
    double a = 0;
    for (Index i = 0; i < m; ++i) a += (yc.row(i) - yc.row(j)).squaredNorm();
    rhs(j) = a / static_cast<double>(m) - d[j] * d[j];
  }
  // Y^+ 1 = 0 only up to roundoff; thin landmark sets amplify the leak.
  rhs.array() -= rhs.mean();
  return 0.5 * pseudo_inverse(yc) * rhs + c;
}

}  // namespace stresstune
