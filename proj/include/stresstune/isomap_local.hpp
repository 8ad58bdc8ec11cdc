#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stresstune/graph.hpp"
#include "stresstune/stitch.hpp"
#include "stresstune/tune.hpp"

namespace stresstune {

inline constexpr double kDefaultRadiusMultiple = 1.5;

/// multiple x the smallest radius at which the neighborhood graph connects.
inline double default_radius(const Configuration& points, double multiple = kDefaultRadiusMultiple) {
  if (!(multiple >= 1)) throw InvalidArgument("default_radius: multiple must be >= 1");
  return multiple * min_connectivity_radius(points);
}

/// The radius-r neighborhood graph, required to be connected.
inline DissimilarityGraph neighborhood_graph(const Configuration& points, double r) {
  DissimilarityGraph g = radius_graph(points, r);
  if (!is_connected(g))
    throw DisconnectedGraph("local_isomap: neighborhood graph at r=" + std::to_string(r) +
                            " is disconnected; use r >= min_connectivity_radius = " +
                            std::to_string(min_connectivity_radius(points)));
  return g;
}

/// Neighborhood graph on the ambient points, then patch stitching in dimension p.
inline Configuration local_isomap(const Configuration& points, double r, int h, Index p,
                                  const MdsMapOptions& opt = {}) {
  if (p >= points.dim())
    throw InvalidArgument("local_isomap: target dimension must be below the ambient dimension");
  return mds_map_p_detailed(neighborhood_graph(points, r), h, p, opt).embedding;
}

/// Hop sweep for local Isomap on a fixed neighborhood graph.
inline SweepReport local_isomap_sweep(const Configuration& points, double r, const std::vector<int>& hs, Index p,
                                      const std::optional<Configuration>& truth = std::nullopt,
                                      const SweepOptions& opt = {}) {
  if (p >= points.dim())
    throw InvalidArgument("local_isomap: target dimension must be below the ambient dimension");
  return sweep_hops(neighborhood_graph(points, r), p, hs, truth, opt);
}

}  // namespace stresstune
