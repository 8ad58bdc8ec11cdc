#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "stresstune/error.hpp"

namespace stresstune {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// An indexed point set in R^p, stored one point per row.
///
/// Holds both ground-truth configurations and embeddings. Construction
/// validates n >= 1, p >= 1 and finite coordinates.
class Configuration {
 public:
  explicit Configuration(Matrix points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1)
      throw InvalidArgument("Configuration needs at least one point of dimension >= 1");
    if (!points_.allFinite()) throw InvalidArgument("Configuration has non-finite coordinates");
  }

  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }
  Eigen::RowVectorXd point(Index i) const { return points_.row(i); }
  Vector centroid() const { return points_.colwise().mean().transpose(); }

  /// Copy with point rows reordered: result.point(i) == point(order[i]).
  template <typename IndexRange>
  Configuration select(const IndexRange& order) const {
    Matrix out(static_cast<Index>(std::size(order)), dim());
    Index r = 0;
    for (auto i : order) out.row(r++) = points_.row(static_cast<Index>(i));
    return Configuration(std::move(out));
  }

  Configuration scaled(double factor) const { return Configuration(points_ * factor); }

 private:
  Matrix points_;
};

/// Square symmetric matrix. Entries are finite or +infinity; the latter is the
/// "missing / unreachable" sentinel produced by shortest-path completion.
class DenseSymmetricMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  explicit DenseSymmetricMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidArgument("DenseSymmetricMatrix must be square");
    const Index k = m_.rows();
    for (Index i = 0; i < k; ++i) {
      for (Index j = i; j < k; ++j) {
        const double a = m_(i, j), b = m_(j, i);
        if (std::isnan(a) || a == -kInfinity || std::isnan(b) || b == -kInfinity)
          throw InvalidArgument("DenseSymmetricMatrix entry is NaN or -inf");
        if (a != b && !(std::abs(a - b) <= kSymmetryTolerance))
          throw InvalidArgument("DenseSymmetricMatrix is not symmetric at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
      }
    }
  }

  Index order() const { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }
  bool is_complete() const { return m_.allFinite(); }

 private:
  Matrix m_;
};

/// x -> Q x + t with Q orthogonal.
class RigidMap {
 public:
  static constexpr double kOrthogonalityTolerance = 1e-10;

  RigidMap(Matrix q, Vector t, bool allow_reflection)
      : q_(std::move(q)), t_(std::move(t)), allow_reflection_(allow_reflection) {
    if (q_.rows() != q_.cols() || q_.rows() != t_.size())
      throw InvalidArgument("RigidMap: Q must be p x p and t of length p");
    Matrix gram = q_.transpose() * q_;
    if ((gram - Matrix::Identity(q_.rows(), q_.cols())).cwiseAbs().maxCoeff() >
        kOrthogonalityTolerance)
      throw InvalidArgument("RigidMap: Q is not orthogonal");
    if (!allow_reflection_ && q_.determinant() < 0)
      throw InvalidArgument("RigidMap: reflection present but not allowed");
  }

  static RigidMap identity(Index p) { return RigidMap(Matrix::Identity(p, p), Vector::Zero(p), false); }

  const Matrix& rotation() const { return q_; }
  const Vector& translation() const { return t_; }
  bool allow_reflection() const { return allow_reflection_; }
  Index dim() const { return q_.rows(); }

  Vector apply(const Vector& x) const { return q_ * x + t_; }

  Matrix apply_rows(const Matrix& rows) const {
    return (rows * q_.transpose()).rowwise() + t_.transpose();
  }

  Configuration apply(const Configuration& c) const {
    if (c.dim() != dim()) throw InvalidArgument("RigidMap: dimension mismatch");
    return Configuration(apply_rows(c.points()));
  }

 private:
  Matrix q_;
  Vector t_;
  bool allow_reflection_;
};

// ---------------------------------------------------------------------------
// Numeric primitives
// ---------------------------------------------------------------------------

inline DenseSymmetricMatrix pairwise_sq_distances(const Configuration& config) {
  const Index n = config.size();
  const Matrix& x = config.points();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = (x.row(i) - x.row(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return DenseSymmetricMatrix(std::move(d));
}

/// b_ij = a_ij - mean(row i) - mean(col j) + grand mean.
inline DenseSymmetricMatrix double_center(const DenseSymmetricMatrix& a) {
  const Matrix& m = a.matrix();
  if (!m.allFinite()) throw InvalidArgument("double_center: matrix has missing entries");
  const Index k = m.rows();
  const Vector row_mean = m.rowwise().mean();
  const Eigen::RowVectorXd col_mean = m.colwise().mean();
  const double grand = m.mean();
  Matrix b(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = i; j < k; ++j) {
      const double v = m(i, j) - row_mean(i) - col_mean(j) + grand;
      b(i, j) = v;
      b(j, i) = v;
    }
  }
  return DenseSymmetricMatrix(std::move(b));
}

struct EigenPairs {
  Vector values;   // descending
  Matrix vectors;  // one orthonormal column per value
};

struct EigenOptions {
  /// Orders up to this size use a full dense decomposition; larger ones use
  /// block-Krylov Rayleigh-Ritz on the top of the spectrum.
  Index dense_cutoff = 200;
  /// Number of subspace enlargements before giving up.
  int max_attempts = 8;
  /// Residual target relative to the Frobenius norm of B.
  double residual_tol = 1e-10;
};

namespace detail {

inline EigenPairs dense_top_eigenpairs(const Matrix& b, Index p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("top_eigenpairs: dense eigensolver did not converge");
  const Index k = b.rows();
  EigenPairs out{Vector(p), Matrix(k, p)};
  for (Index c = 0; c < p; ++c) {
    out.values(c) = es.eigenvalues()(k - 1 - c);
    out.vectors.col(c) = es.eigenvectors().col(k - 1 - c);
  }
  return out;
}

// Orthogonalizes w against the first `cols` columns of q (two passes).
// Returns the norm left after projection.
inline double orthogonalize(const Matrix& q, Index cols, Vector& w) {
  if (cols > 0) {
    for (int pass = 0; pass < 2; ++pass) {
      const Vector coeff = q.leftCols(cols).transpose() * w;
      w.noalias() -= q.leftCols(cols) * coeff;
    }
  }
  return w.norm();
}

inline EigenPairs krylov_top_eigenpairs(const Matrix& b, Index p, const EigenOptions& opt) {
  const Index k = b.rows();
  const double bnorm = b.norm();
  if (bnorm == 0.0) return EigenPairs{Vector::Zero(p), Matrix::Identity(k, p)};

  const Index block = std::min<Index>(k, p + 2);
  Index m = std::min<Index>(k, std::max<Index>(8 * block, 48));
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_vector = [&] {
    Vector v(k);
    for (Index i = 0; i < k; ++i) v(i) = normal(rng);
    return v;
  };

  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    Matrix q(k, m);
    Index cols = 0;
    auto append = [&](Vector w) {
      const double before = w.norm();
      double after = orthogonalize(q, cols, w);
      // Deflation: a dependent direction is replaced by a fresh random one.
      for (int tries = 0; !(after > 1e-10 * std::max(before, 1e-300)) && tries < 8; ++tries) {
        w = random_vector();
        const double b0 = w.norm();
        after = orthogonalize(q, cols, w);
        if (after > 1e-10 * b0) break;
      }
      q.col(cols++) = w / after;
    };
    Index block_start = 0;
    for (Index c = 0; c < block && cols < m; ++c) append(random_vector());
    Index block_len = cols;
    while (cols < m) {
      const Matrix w = b * q.middleCols(block_start, block_len);
      const Index new_start = cols;
      for (Index c = 0; c < w.cols() && cols < m; ++c) append(w.col(c));
      block_start = new_start;
      block_len = cols - new_start;
    }
    const Matrix bq = b * q;
    Matrix h = q.transpose() * bq;
    h = (0.5 * (h + h.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
      throw ConvergenceError("top_eigenpairs: projected eigenproblem did not converge");
    EigenPairs out{Vector(p), Matrix(k, p)};
    bool converged = true;
    for (Index c = 0; c < p; ++c) {
      const Vector s = es.eigenvectors().col(m - 1 - c);
      out.values(c) = es.eigenvalues()(m - 1 - c);
      out.vectors.col(c) = q * s;
      const double res = (bq * s - out.values(c) * out.vectors.col(c)).norm();
      if (!(res <= opt.residual_tol * bnorm)) converged = false;
    }
    if (converged || m == k) {
      if (!converged && m == k) {
        // The subspace is all of R^k; Rayleigh-Ritz is exact up to rounding.
        return dense_top_eigenpairs(b, p);
      }
      return out;
    }
    m = std::min<Index>(k, 2 * m);
  }
  throw ConvergenceError("top_eigenpairs: no convergence within " + std::to_string(opt.max_attempts) +
                         " subspace enlargements");
}

}  // namespace detail

/// The p algebraically largest eigenpairs of a symmetric matrix, in
/// descending order, with orthonormal eigenvectors.
inline EigenPairs top_eigenpairs(const DenseSymmetricMatrix& b, Index p, const EigenOptions& opt = {}) {
  const Index k = b.order();
  if (p < 1 || p > k) throw InvalidArgument("top_eigenpairs: need 1 <= p <= order");
  if (!b.is_complete()) throw InvalidArgument("top_eigenpairs: matrix has missing entries");
  if (k <= opt.dense_cutoff) return detail::dense_top_eigenpairs(b.matrix(), p);
  return detail::krylov_top_eigenpairs(b.matrix(), p, opt);
}

/// Moore-Penrose pseudo-inverse by SVD; singular values below
/// 1e-10 * sigma_max count as zero.
inline Matrix pseudo_inverse(const Matrix& y, double rel_cutoff = 1e-10) {
  if (y.size() == 0) return Matrix(y.cols(), y.rows());
  Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = rel_cutoff * (s.size() > 0 ? s(0) : 0.0);
  Vector inv = Vector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Numerical rank with the same relative cutoff as pseudo_inverse.
inline Index numerical_rank(const Matrix& y, double rel_cutoff = 1e-10) {
  if (y.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(y);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_cutoff * s(0)) ++r;
  return r;
}

/// Largest pairwise Euclidean distance.
inline double diameter(const Configuration& c) {
  const Matrix& x = c.points();
  double best = 0;
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = i + 1; j < x.rows(); ++j) best = std::max(best, (x.row(i) - x.row(j)).squaredNorm());
  return std::sqrt(best);
}

}  // namespace stresstune
