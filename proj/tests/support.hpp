#pragma once

// Test-only generators and reference implementations. Nothing here calls
// into the library's numerical routines.

#include <cmath>
#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "stresstune/stresstune.hpp"

namespace st_test {

using stresstune::Index;
using stresstune::Matrix;
using stresstune::Vector;

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed, double lo = -1, double hi = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

inline stresstune::Configuration random_config(Index n, Index p, std::uint64_t seed, double scale = 1) {
  return stresstune::Configuration(random_matrix(n, p, seed, 0, scale));
}

inline Matrix random_symmetric(Index k, std::uint64_t seed) {
  Matrix a = random_matrix(k, k, seed);
  return 0.5 * (a + a.transpose());
}

/// Random orthogonal matrix via Gram-Schmidt on a random square matrix.
inline Matrix random_orthogonal(Index p, std::uint64_t seed, bool proper = true) {
  Matrix a = random_matrix(p, p, seed);
  for (Index c = 0; c < p; ++c) {
    for (Index b = 0; b < c; ++b) a.col(c) -= a.col(b).dot(a.col(c)) * a.col(b);
    a.col(c).normalize();
  }
  if (proper && a.determinant() < 0) a.col(0) *= -1;
  return a;
}

/// Cyclic Jacobi eigenvalue iteration; returns eigenvalues descending with
/// matching eigenvector columns.
inline std::pair<Vector, Matrix> jacobi_eigen(Matrix a, int sweeps = 100) {
  const Index k = a.rows();
  Matrix v = Matrix::Identity(k, k);
  for (int s = 0; s < sweeps; ++s) {
    double off = 0;
    for (Index i = 0; i < k; ++i)
      for (Index j = i + 1; j < k; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (Index pi = 0; pi < k; ++pi)
      for (Index q = pi + 1; q < k; ++q) {
        if (std::abs(a(pi, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(pi, pi)) / (2 * a(pi, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), sn = t * c;
        for (Index r = 0; r < k; ++r) {
          const double arp = a(r, pi), arq = a(r, q);
          a(r, pi) = c * arp - sn * arq;
          a(r, q) = sn * arp + c * arq;
        }
        for (Index r = 0; r < k; ++r) {
          const double apr = a(pi, r), aqr = a(q, r);
          a(pi, r) = c * apr - sn * aqr;
          a(q, r) = sn * apr + c * aqr;
        }
        for (Index r = 0; r < k; ++r) {
          const double vrp = v(r, pi), vrq = v(r, q);
          v(r, pi) = c * vrp - sn * vrq;
          v(r, q) = sn * vrp + c * vrq;
        }
      }
  }
  std::vector<Index> idx(k);
  for (Index i = 0; i < k; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](Index x, Index y) { return a(x, x) > a(y, y); });
  Vector vals(k);
  Matrix vecs(k, k);
  for (Index i = 0; i < k; ++i) {
    vals(i) = a(idx[i], idx[i]);
    vecs.col(i) = v.col(idx[i]);
  }
  return {vals, vecs};
}

/// Naive double-loop squared distance matrix.
inline Matrix naive_sq_distances(const Matrix& x) {
  Matrix d(x.rows(), x.rows());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.rows(); ++j) {
      double s = 0;
      for (Index c = 0; c < x.cols(); ++c) s += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
      d(i, j) = s;
    }
  return d;
}

inline Matrix naive_distances(const Matrix& x) { return naive_sq_distances(x).cwiseSqrt(); }

/// Brute-force 2D alignment error: scans rotation angles (and reflection) with
/// optimal translation, then polishes the best angle by golden-section search.
inline double brute_aligned_error_2d(const Matrix& y, const Matrix& x) {
  const Eigen::RowVector2d cy = y.colwise().mean(), cx = x.colwise().mean();
  const Matrix yc = y.rowwise() - cy, xc = x.rowwise() - cx;
  auto err = [&](double a, bool refl) {
    Eigen::Matrix2d q;
    q << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    if (refl) q.col(1) *= -1;
    return (yc * q.transpose() - xc).squaredNorm();
  };
  double best = std::numeric_limits<double>::infinity();
  for (bool refl : {false, true}) {
    double ba = 0, be = err(0, refl);
    for (int s = 1; s < 3600; ++s) {
      const double a = 2 * M_PI * s / 3600, e = err(a, refl);
      if (e < be) {
        be = e;
        ba = a;
      }
    }
    double lo = ba - 2 * M_PI / 3600, hi = ba + 2 * M_PI / 3600;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (err(m1, refl) < err(m2, refl))
        hi = m2;
      else
        lo = m1;
    }
    best = std::min({best, be, err(0.5 * (lo + hi), refl)});
  }
  return best;
}

/// Simple undirected weighted graph as an adjacency list, for reference
/// traversals independent of the library's CSR structure.
struct RefGraph {
  Index n;
  std::vector<std::vector<std::pair<Index, double>>> adj;
};

inline RefGraph ref_graph(const stresstune::DissimilarityGraph& g) {
  RefGraph r{g.size(), std::vector<std::vector<std::pair<Index, double>>>(g.size())};
  for (const auto& e : g.edges()) {
    r.adj[e.i].push_back({e.j, e.d});
    r.adj[e.j].push_back({e.i, e.d});
  }
  return r;
}

/// Random sparse connected graph: a random spanning tree plus extra edges.
inline stresstune::DissimilarityGraph random_sparse_graph(Index n, Index extra, std::uint64_t seed,
                                                          bool dyadic = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  auto weight = [&] {
    const double x = w(rng);
    return dyadic ? std::round(x * 64) / 64 : x;
  };
  std::vector<stresstune::Edge> edges;
  std::set<std::pair<Index, Index>> used;
  for (Index v = 1; v < n; ++v) {
    const Index u = std::uniform_int_distribution<Index>(0, v - 1)(rng);
    edges.push_back({u, v, weight()});
    used.insert({u, v});
  }
  std::uniform_int_distribution<Index> node(0, n - 1);
  for (Index k = 0; k < extra; ++k) {
    Index a = node(rng), b = node(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!used.insert({a, b}).second) continue;
    edges.push_back({a, b, weight()});
  }
  return stresstune::DissimilarityGraph(n, std::move(edges));
}

/// Complete graph with exact Euclidean weights.
inline stresstune::DissimilarityGraph complete_graph(const stresstune::Configuration& x) {
  std::vector<stresstune::Edge> edges;
  for (Index i = 0; i < x.size(); ++i)
    for (Index j = i + 1; j < x.size(); ++j) edges.push_back({i, j, (x.point(i) - x.point(j)).norm()});
  return stresstune::DissimilarityGraph(x.size(), std::move(edges));
}

/// Jittered square grid of side m in [0, m-1]^2 (tiny jitter keeps points generic).
inline stresstune::Configuration jittered_grid(Index m, std::uint64_t seed, double jitter = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  Matrix x(m * m, 2);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) {
      x(a * m + b, 0) = static_cast<double>(a) + u(rng);
      x(a * m + b, 1) = static_cast<double>(b) + u(rng);
    }
  return stresstune::Configuration(std::move(x));
}

}  // namespace st_test
