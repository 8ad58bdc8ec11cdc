#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "stresstune/core.hpp"
#include "stresstune/graph.hpp"

namespace stresstune {

/// Default experiment parameters.
namespace presets {
inline constexpr int kSyntheticNeighbors = 15;
inline constexpr int kCityNeighbors = 12;
inline constexpr double kNoiseSigma = 0.15;
inline constexpr double kJitterFraction = 0.2;
inline constexpr double kSSurfaceAlpha = 10.0;
inline constexpr double kSwissRollAlpha = 50.0;
inline constexpr double kEarthRadiusKm = 6371.0088;
}  // namespace presets

// ---------------------------------------------------------------------------
// Planar domains
// ---------------------------------------------------------------------------

struct Rect {
  double x0, y0, x1, y1;
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

enum class ShapeKind { rectangle, hollow_rectangle, c_shape, h_shape };

/// Union of closed rectangles minus closed rectangular holes.
struct DomainShape {
  ShapeKind kind;
  std::vector<Rect> include;
  std::vector<Rect> exclude;

  static DomainShape make(ShapeKind kind) {
    switch (kind) {
      case ShapeKind::rectangle:
        return {kind, {{0, 0, 2, 1}}, {}};
      case ShapeKind::hollow_rectangle:
        return {kind, {{0, 0, 3, 2}}, {{1, 0.8, 2, 1.2}}};
      case ShapeKind::c_shape:
        return {kind, {{0, 0, 3, 3}}, {{1, 1, 3, 2}}};
      case ShapeKind::h_shape:
        return {kind, {{0, 0, 1, 3}, {2, 0, 3, 3}, {1, 1.25, 2, 1.75}}, {}};
    }
    throw InvalidArgument("unknown shape");
  }

  bool contains(double x, double y) const {
    bool in = false;
    for (const auto& r : include) in = in || r.contains(x, y);
    if (!in) return false;
    for (const auto& r : exclude)
      if (r.contains(x, y)) return false;
    return true;
  }

  Rect bounds() const {
    Rect b = include.front();
    for (const auto& r : include) b = {std::min(b.x0, r.x0), std::min(b.y0, r.y0), std::max(b.x1, r.x1), std::max(b.y1, r.y1)};
    return b;
  }
};

inline std::string_view shape_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::rectangle: return "rectangle";
    case ShapeKind::hollow_rectangle: return "hollow";
    case ShapeKind::c_shape: return "cshape";
    case ShapeKind::h_shape: return "hshape";
  }
  return "?";
}

inline ShapeKind parse_shape(std::string_view s) {
  if (s == "rectangle") return ShapeKind::rectangle;
  if (s == "hollow" || s == "hollow_rectangle") return ShapeKind::hollow_rectangle;
  if (s == "cshape" || s == "c_shape") return ShapeKind::c_shape;
  if (s == "hshape" || s == "h_shape") return ShapeKind::h_shape;
  throw InvalidArgument("unknown shape '" + std::string(s) + "' (expected rectangle|hollow|cshape|hshape)");
}

namespace detail {

// Grid centered in the bounding box with spacing s; only in-domain nodes.
inline std::vector<std::pair<double, double>> domain_grid(const DomainShape& shape, double s) {
  const Rect b = shape.bounds();
  const long nx = static_cast<long>(std::floor((b.x1 - b.x0) / s)) + 1;
  const long ny = static_cast<long>(std::floor((b.y1 - b.y0) / s)) + 1;
  const double ox = b.x0 + 0.5 * ((b.x1 - b.x0) - static_cast<double>(nx - 1) * s);
  const double oy = b.y0 + 0.5 * ((b.y1 - b.y0) - static_cast<double>(ny - 1) * s);
  std::vector<std::pair<double, double>> pts;
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) {
      const double x = ox + static_cast<double>(i) * s, y = oy + static_cast<double>(j) * s;
      if (shape.contains(x, y)) pts.emplace_back(x, y);
    }
  return pts;
}

}  // namespace detail

struct GridSample {
  Configuration points;
  double spacing;
};

/// Jittered square grid inside the domain. The spacing is chosen so the
/// in-domain count is the largest value <= 1.05 * n_target (and >= 0.8 *
/// n_target); each point then moves by an independent uniform offset in
/// [-jitter_frac * s, jitter_frac * s]^2.
inline GridSample generate_shape_sample(const DomainShape& shape, Index n_target, double jitter_frac,
                                        std::uint64_t seed) {
  if (n_target < 4) throw InvalidArgument("generate_shape: n_target must be >= 4");
  if (!(jitter_frac >= 0 && jitter_frac < 0.5)) throw InvalidArgument("generate_shape: jitter_frac must be in [0, 0.5)");
  const Rect b = shape.bounds();
  const double s0 = std::sqrt((b.x1 - b.x0) * (b.y1 - b.y0) / static_cast<double>(n_target));
  const double upper = 1.05 * static_cast<double>(n_target), lower = 0.8 * static_cast<double>(n_target);
  double best_s = 0;
  std::size_t best_count = 0;
  // Scan spacings from coarse to fine; the first spacing reaching the best count wins.
  const int steps = 4000;
  for (int k = 0; k <= steps; ++k) {
    const double s = s0 * 2.0 * std::pow(0.1, static_cast<double>(k) / steps);
    const std::size_t c = detail::domain_grid(shape, s).size();
    if (static_cast<double>(c) > upper) continue;
    if (static_cast<double>(c) >= lower && c > best_count) {
      best_count = c;
      best_s = s;
    }
  }
  if (best_count == 0)
    throw InvalidArgument("generate_shape: no grid spacing gives a point count in [0.8, 1.05] x " +
                          std::to_string(n_target));
  const auto grid = detail::domain_grid(shape, best_s);
  std::mt19937_64 rng(seed);
  const double a = jitter_frac * best_s;
  std::uniform_real_distribution<double> jitter(-a, a);
  Matrix x(static_cast<Index>(grid.size()), 2);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double dx = 0, dy = 0;
    if (a > 0) {
      dx = jitter(rng);
      dy = jitter(rng);
    }
    x(static_cast<Index>(k), 0) = grid[k].first + dx;
    x(static_cast<Index>(k), 1) = grid[k].second + dy;
  }
  return {Configuration(std::move(x)), best_s};
}

inline Configuration generate_shape(const DomainShape& shape, Index n_target, double jitter_frac, std::uint64_t seed) {
  return generate_shape_sample(shape, n_target, jitter_frac, seed).points;
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

/// The per-edge factors eps_ij ~ U[-sigma, sigma], one per edge in edge order.
inline std::vector<double> multiplicative_noise_draws(std::size_t edges, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0 && sigma < 1)) throw InvalidArgument("noise sigma must be in [0, 1)");
  std::vector<double> eps(edges, 0.0);
  if (sigma == 0) return eps;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-sigma, sigma);
  for (auto& e : eps) e = u(rng);
  return eps;
}

/// d_ij <- (1 + eps_ij) d_ij with eps_ij iid uniform on [-sigma, sigma].
inline DissimilarityGraph apply_multiplicative_noise(const DissimilarityGraph& g, double sigma, std::uint64_t seed) {
  const auto eps = multiplicative_noise_draws(g.edge_count(), sigma, seed);
  std::vector<double> w(g.edge_count());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = (1.0 + eps[k]) * g.edges()[k].d;
  return g.with_weights(w);
}

inline Configuration add_gaussian_noise(const Configuration& config, double sigma_amb, std::uint64_t seed) {
  if (!(sigma_amb >= 0)) throw InvalidArgument("add_gaussian_noise: sigma must be >= 0");
  if (sigma_amb == 0) return config;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma_amb);
  Matrix x = config.points();
  for (Index i = 0; i < x.rows(); ++i)
    for (Index c = 0; c < x.cols(); ++c) x(i, c) += normal(rng);
  return Configuration(std::move(x));
}

// ---------------------------------------------------------------------------
// Surface lifts R^2 -> R^3. Input (x1, x2) is read as (v, u): the first
// coordinate runs along the curved direction.
// ---------------------------------------------------------------------------

inline Configuration lift_s_surface(const Configuration& config, double alpha) {
  if (config.dim() != 2) throw InvalidArgument("lift_s_surface: input must be planar");
  if (!(alpha > 0)) throw InvalidArgument("lift_s_surface: alpha must be > 0");
  Matrix z(config.size(), 3);
  for (Index i = 0; i < config.size(); ++i) {
    const double v = config.points()(i, 0), u = config.points()(i, 1);
    const double t = alpha * v;
    const double sgn = (t > 0) - (t < 0);
    z(i, 0) = std::sin(t) / alpha;
    z(i, 1) = u;
    z(i, 2) = sgn * (std::cos(t) - 1.0) / alpha;
  }
  return Configuration(std::move(z));
}

/// Arc length of the spiral (s cos(alpha s), s sin(alpha s)) from 0 to s.
inline double swiss_arc_length(double s, double alpha) {
  const double as = alpha * s;
  return 0.5 * (s * std::sqrt(1.0 + as * as) + std::asinh(as) / alpha);
}

/// Solves swiss_arc_length(s) = v for s in [0, v] by Newton steps kept inside
/// a shrinking bracket (bisection when a step leaves it).
inline double swiss_arc_parameter(double v, double alpha) {
  if (v < 0) throw InvalidArgument("lift_swiss_roll: v must be >= 0");
  if (v == 0) return 0;
  double lo = 0, hi = v, s = std::sqrt(2.0 * v / alpha);
  if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = swiss_arc_length(s, alpha) - v;
    if (std::abs(f) <= 1e-10) return s;
    if (f > 0)
      hi = s;
    else
      lo = s;
    double next = s - f / std::sqrt(1.0 + alpha * alpha * s * s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    s = next;
  }
  throw ConvergenceError("swiss_arc_parameter: no convergence for v=" + std::to_string(v));
}

inline Configuration lift_swiss_roll(const Configuration& config, double alpha) {
  if (config.dim() != 2) throw InvalidArgument("lift_swiss_roll: input must be planar");
  if (!(alpha > 0)) throw InvalidArgument("lift_swiss_roll: alpha must be > 0");
  Matrix z(config.size(), 3);
  for (Index i = 0; i < config.size(); ++i) {
    const double v = config.points()(i, 0), u = config.points()(i, 1);
    if (v < 0) throw InvalidArgument("lift_swiss_roll: point " + std::to_string(i) + " has negative v");
    const double s = swiss_arc_parameter(v, alpha);
    z(i, 0) = s * std::cos(alpha * s);
    z(i, 1) = u;
    z(i, 2) = s * std::sin(alpha * s);
  }
  return Configuration(std::move(z));
}

enum class SurfaceKind { s_surface, swiss_roll };

/// Rescales a planar configuration uniformly so its first coordinate spans
/// unit length: [-1/2, 1/2] for the S surface (one half per bend) and [0, 1]
/// for the Swiss roll. The result is the ground truth the lift preserves.
inline Configuration fit_to_lift_domain(const Configuration& config, SurfaceKind kind) {
  if (config.dim() != 2) throw InvalidArgument("fit_to_lift_domain: input must be planar");
  const Matrix& x = config.points();
  const double lo = x.col(0).minCoeff(), width = x.col(0).maxCoeff() - lo;
  if (!(width > 0)) throw DegenerateGeometry("fit_to_lift_domain: zero width");
  Matrix y = x;
  y.col(0) = (x.col(0).array() - lo) / width;
  y.col(1) = (x.col(1).array() - x.col(1).minCoeff()) / width;
  if (kind == SurfaceKind::s_surface) y.col(0).array() -= 0.5;
  return Configuration(std::move(y));
}

// ---------------------------------------------------------------------------
// Cities
// ---------------------------------------------------------------------------

struct City {
  std::string name;
  double lat;  // degrees
  double lon;  // degrees
};

class CityTable {
 public:
  CityTable() = default;
  explicit CityTable(std::vector<City> rows) : rows_(std::move(rows)) {
    for (std::size_t k = 0; k < rows_.size(); ++k) check(rows_[k], k);
  }
  static void check(const City& c, std::size_t row) {
    if (!(c.lat >= -90 && c.lat <= 90))
      throw InvalidArgument("city row " + std::to_string(row) + " (" + c.name + "): latitude out of [-90, 90]");
    if (!(c.lon >= -180 && c.lon <= 180))
      throw InvalidArgument("city row " + std::to_string(row) + " (" + c.name + "): longitude out of [-180, 180]");
  }
  std::size_t size() const { return rows_.size(); }
  const City& operator[](std::size_t k) const { return rows_[k]; }
  const std::vector<City>& rows() const { return rows_; }

 private:
  std::vector<City> rows_;
};

/// Central angle in radians between two (lat, lon) positions given in degrees.
inline double haversine_angle(double lat1, double lon1, double lat2, double lon2) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double p1 = lat1 * deg, p2 = lat2 * deg;
  const double dlat = p2 - p1, dlon = (lon2 - lon1) * deg;
  const double s1 = std::sin(0.5 * dlat), s2 = std::sin(0.5 * dlon);
  const double h = s1 * s1 + std::cos(p1) * std::cos(p2) * s2 * s2;
  return 2.0 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

inline DenseSymmetricMatrix haversine_matrix(const CityTable& cities, double radius_km = presets::kEarthRadiusKm) {
  if (!(radius_km > 0)) throw InvalidArgument("haversine_matrix: radius must be > 0");
  const Index n = static_cast<Index>(cities.size());
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const auto &a = cities[i], &b = cities[j];
      d(i, j) = d(j, i) = radius_km * haversine_angle(a.lat, a.lon, b.lat, b.lon);
    }
  return DenseSymmetricMatrix(std::move(d));
}

/// Equirectangular projection about the mean latitude, in km. A planar
/// reference for evaluating city embeddings.
inline Configuration project_cities(const CityTable& cities, double radius_km = presets::kEarthRadiusKm) {
  if (cities.size() == 0) throw InvalidArgument("project_cities: empty table");
  constexpr double deg = std::numbers::pi / 180.0;
  double lat0 = 0, lon0 = 0;
  for (const auto& c : cities.rows()) {
    lat0 += c.lat;
    lon0 += c.lon;
  }
  lat0 /= static_cast<double>(cities.size());
  lon0 /= static_cast<double>(cities.size());
  Matrix x(static_cast<Index>(cities.size()), 2);
  for (std::size_t k = 0; k < cities.size(); ++k) {
    x(static_cast<Index>(k), 0) = radius_km * (cities[k].lon - lon0) * deg * std::cos(lat0 * deg);
    x(static_cast<Index>(k), 1) = radius_km * (cities[k].lat - lat0) * deg;
  }
  return Configuration(std::move(x));
}

}  // namespace stresstune
