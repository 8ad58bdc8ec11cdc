#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "stresstune/align.hpp"
#include "stresstune/stitch.hpp"

namespace stresstune {

namespace detail {
inline void require_coverage(const DissimilarityGraph& g, const Configuration& y, const char* what) {
  if (y.size() != g.size())
    throw InvalidArgument(std::string(what) + ": configuration has " + std::to_string(y.size()) +
                          " points but the graph has " + std::to_string(g.size()) + " nodes");
}
}  // namespace detail

/// Raw stress: sum over edges of (||y_i - y_j||^2 - d_ij^2)^2. This is the
/// tuning objective.
inline double stress(const DissimilarityGraph& g, const Configuration& y) {
  detail::require_coverage(g, y, "stress");
  const Matrix& pts = y.points();
  double s = 0;
  for (const auto& e : g.edges()) {
    const double r = (pts.row(e.i) - pts.row(e.j)).squaredNorm() - e.d * e.d;
    s += r * r;
  }
  return s;
}

/// stress / |E|, for comparing instances of different size.
inline double stress_per_edge(const DissimilarityGraph& g, const Configuration& y) {
  return g.edge_count() ? stress(g, y) / static_cast<double>(g.edge_count()) : 0.0;
}

/// Sum over edges of (||y_i - y_j|| - d_ij)^2. Reported only; never used for selection.
inline double unsquared_stress(const DissimilarityGraph& g, const Configuration& y) {
  detail::require_coverage(g, y, "unsquared_stress");
  return smacof_stress(g, y.points());
}

/// Sum over edges of (||y_i - y_j||^2 - ||x_i - x_j||^2)^2.
inline double noiseless_stress(const DissimilarityGraph& g, const Configuration& y, const Configuration& x) {
  detail::require_coverage(g, y, "noiseless_stress");
  detail::require_coverage(g, x, "noiseless_stress");
  double s = 0;
  for (const auto& e : g.edges()) {
    const double r = (y.points().row(e.i) - y.points().row(e.j)).squaredNorm() -
                     (x.points().row(e.i) - x.points().row(e.j)).squaredNorm();
    s += r * r;
  }
  return s;
}

/// Sum over all pairs i<j of (||y_i - y_j||^2 - ||x_i - x_j||^2)^2.
inline double complete_noiseless_stress(const Configuration& y, const Configuration& x) {
  if (y.size() != x.size()) throw InvalidArgument("complete_noiseless_stress: size mismatch");
  double s = 0;
  for (Index i = 0; i < y.size(); ++i)
    for (Index j = i + 1; j < y.size(); ++j) {
      const double r = (y.points().row(i) - y.points().row(j)).squaredNorm() -
                       (x.points().row(i) - x.points().row(j)).squaredNorm();
      s += r * r;
    }
  return s;
}

struct SweepRow {
  int h = 0;
  bool failed = false;
  std::string failure;  // reason when failed
  double stress = 0;
  double stress_per_edge = 0;
  std::optional<double> embedding_error;
  std::optional<double> scale_ratio;
  double wall_time_s = 0;
  std::optional<Configuration> embedding;  // kept when SweepOptions::keep_embeddings
};

struct SweepReport {
  std::vector<SweepRow> rows;  // ascending h
  int selected_h = 0;          // argmin stress over non-failed rows, smallest h on ties

  const SweepRow& row(int h) const {
    for (const auto& r : rows)
      if (r.h == h) return r;
    throw InvalidArgument("SweepReport: no row for h=" + std::to_string(h));
  }
  const SweepRow& selected() const { return row(selected_h); }

  /// Smallest embedding error over non-failed rows (needs ground truth).
  std::optional<double> min_embedding_error() const {
    std::optional<double> best;
    for (const auto& r : rows)
      if (!r.failed && r.embedding_error && (!best || *r.embedding_error < *best)) best = r.embedding_error;
    return best;
  }
};

struct SweepOptions {
  MdsMapOptions mds{};
  bool keep_embeddings = false;
};

/// Runs the patch-stitching embedding for every hop count in `hs` and picks
/// the one with the smallest stress. Hop counts whose run fails (for example
/// an unmergeable patch) are marked and excluded.
inline SweepReport sweep_hops(const DissimilarityGraph& g, Index p, std::vector<int> hs,
                              const std::optional<Configuration>& truth = std::nullopt,
                              const SweepOptions& opt = {}) {
  if (hs.empty()) throw InvalidArgument("sweep_hops: no hop values given");
  for (int h : hs)
    if (h < 1) throw InvalidArgument("sweep_hops: hop values must be >= 1");
  if (truth) detail::require_coverage(g, *truth, "sweep_hops ground truth");
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());

  SweepReport report;
  std::optional<double> best;
  for (int h : hs) {
    SweepRow row;
    row.h = h;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Configuration y = mds_map_p_detailed(g, h, p, opt.mds).embedding;
      row.stress = stress(g, y);
      row.stress_per_edge = g.edge_count() ? row.stress / static_cast<double>(g.edge_count()) : 0.0;
      if (truth) {
        row.embedding_error = aligned_error(y, *truth);
        row.scale_ratio = scale_ratio(y, *truth);
      }
      if (opt.keep_embeddings) row.embedding = std::move(y);
    } catch (const Error& e) {
      row.failed = true;
      row.failure = e.what();
    }
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!row.failed && (!best || row.stress < *best)) {
      best = row.stress;
      report.selected_h = h;
    }
    report.rows.push_back(std::move(row));
  }
  if (!best) {
    std::string why = report.rows.front().failure;
    throw PatchError("sweep_hops: every hop value failed (first failure: " + why + ")");
  }
  return report;
}

}  // namespace stresstune
