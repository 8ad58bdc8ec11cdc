#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "stresstune/align.hpp"
#include "stresstune/embed.hpp"
#include "stresstune/graph.hpp"
#include "stresstune/parallel.hpp"

namespace stresstune {

/// A hop neighborhood together with its completed local dissimilarities and
/// local embedding. Row r of local_embedding is node neighborhood.members[r].
struct Patch {
  HopNeighborhood neighborhood;
  DenseSymmetricMatrix local_d;
  Configuration local_embedding;
};

/// Embeds an already-computed neighborhood: shortest-path completion inside
/// the induced subgraph, classical scaling, then optional SMACOF against the
/// observed (uncompleted) edges of the subgraph.
inline Patch build_patch(const DissimilarityGraph& g, HopNeighborhood nb, Index p, bool refine,
                         const SmacofOptions& smacof_opt = {}) {
  const Index k = static_cast<Index>(nb.members.size());
  if (k <= p)
    throw PatchError("patch at node " + std::to_string(nb.center) + " has " + std::to_string(k) +
                     " nodes; need at least p+1=" + std::to_string(p + 1));
  const DissimilarityGraph sub = g.induced_subgraph(nb.members);
  if (!is_connected(sub))
    throw PatchError("patch at node " + std::to_string(nb.center) + " induces a disconnected subgraph");
  DenseSymmetricMatrix local_d = all_pairs_shortest_paths(sub);
  Configuration x = classical_scaling(local_d, p);
  if (refine) x = smacof(sub, x, smacof_opt).embedding;
  return Patch{std::move(nb), std::move(local_d), std::move(x)};
}

inline Patch build_patch(const DissimilarityGraph& g, Index v, int h, Index p, bool refine,
                         const SmacofOptions& smacof_opt = {}) {
  return build_patch(g, hop_neighborhood(g, v, h), p, refine, smacof_opt);
}

struct MergeRecord {
  Index center;
  std::size_t overlap;
};

/// Partially placed global embedding built up patch by patch.
class GlobalMap {
 public:
  GlobalMap(Index n, Index p) : coords_(Matrix::Zero(n, p)), placed_(n, 0) {
    if (n < 1 || p < 1) throw InvalidArgument("GlobalMap: need n >= 1 and p >= 1");
  }

  /// A map whose placed set is exactly the seed patch, in its local frame.
  static GlobalMap seeded(Index n, const Patch& seed) {
    GlobalMap gm(n, seed.local_embedding.dim());
    const auto& members = seed.neighborhood.members;
    for (std::size_t r = 0; r < members.size(); ++r) gm.place(members[r], seed.local_embedding.point(r));
    gm.log_.push_back({seed.neighborhood.center, 0});
    return gm;
  }

  Index size() const { return coords_.rows(); }
  Index dim() const { return coords_.cols(); }
  bool is_placed(Index v) const { return placed_[v] != 0; }
  Index placed_count() const { return count_; }
  Eigen::RowVectorXd point(Index v) const { return coords_.row(v); }
  const std::vector<MergeRecord>& merge_log() const { return log_; }

  std::vector<Index> unplaced() const {
    std::vector<Index> out;
    for (Index v = 0; v < size(); ++v)
      if (!placed_[v]) out.push_back(v);
    return out;
  }

  Configuration to_configuration() const {
    if (count_ != size())
      throw PatchError("GlobalMap: " + std::to_string(size() - count_) + " nodes are still unplaced");
    return Configuration(coords_);
  }

  /// Procrustes-aligns `patch` to the placed nodes it shares and places its
  /// new nodes. Already placed nodes keep their coordinates.
  void merge(const Patch& patch) {
    const auto& members = patch.neighborhood.members;
    std::vector<Index> shared_rows;
    for (std::size_t r = 0; r < members.size(); ++r)
      if (placed_[members[r]]) shared_rows.push_back(static_cast<Index>(r));
    const Index p = dim();
    const Index m = static_cast<Index>(shared_rows.size());
    if (m < p + 1)
      throw PatchError("merge: patch at node " + std::to_string(patch.neighborhood.center) + " overlaps only " +
                       std::to_string(m) + " placed nodes; need p+1=" + std::to_string(p + 1) +
                       " (increase the hop count)");
    Matrix local(m, p), global(m, p);
    for (Index k = 0; k < m; ++k) {
      local.row(k) = patch.local_embedding.point(shared_rows[k]);
      global.row(k) = coords_.row(members[shared_rows[k]]);
    }
    const Matrix centered = global.rowwise() - global.colwise().mean();
    if (numerical_rank(centered) < p)
      throw PatchError("merge: overlap of patch at node " + std::to_string(patch.neighborhood.center) +
                       " is affinely degenerate in the global map (increase the hop count)");
    const RigidMap t = procrustes_fit(local, global, true).map;
    for (std::size_t r = 0; r < members.size(); ++r)
      if (!placed_[members[r]])
        place(members[r], t.apply(patch.local_embedding.point(static_cast<Index>(r)).transpose()).transpose());
    log_.push_back({patch.neighborhood.center, static_cast<std::size_t>(m)});
  }

 private:
  void place(Index v, const Eigen::RowVectorXd& y) {
    coords_.row(v) = y;
    if (!placed_[v]) {
      placed_[v] = 1;
      ++count_;
    }
  }

  Matrix coords_;
  std::vector<char> placed_;
  Index count_ = 0;
  std::vector<MergeRecord> log_;
};

inline GlobalMap merge(GlobalMap gm, const Patch& patch) {
  gm.merge(patch);
  return gm;
}

struct MdsMapOptions {
  bool refine_patches = true;
  bool final_refine = false;
  SmacofOptions patch_smacof{};
  SmacofOptions final_smacof{};
  /// Patch centers are nodes 0, stride, 2*stride, ...; 1 means every node.
  Index center_stride = 1;
  std::size_t threads = 0;
};

struct MdsMapResult {
  Configuration embedding;
  std::vector<MergeRecord> merge_log;
  std::size_t patches_embedded;
};

/// Seed and merge order, derived from the neighborhoods alone: the seed is
/// the largest patch, then repeatedly the unprocessed patch with the largest
/// overlap with the covered set among those that still add a node. Ties go
/// to the lowest center. Patches with at most p nodes are never mergeable.
inline std::vector<MergeRecord> plan_merge_order(const std::vector<HopNeighborhood>& hoods, Index n, Index p) {
  const std::size_t count = hoods.size();
  std::vector<std::vector<std::size_t>> containing(n);
  for (std::size_t c = 0; c < count; ++c)
    for (Index u : hoods[c].members) containing[u].push_back(c);

  std::vector<std::size_t> overlap(count, 0);
  std::vector<char> processed(count, 0), covered(n, 0);
  Index covered_count = 0;
  auto cover = [&](std::size_t c) {
    processed[c] = 1;
    for (Index u : hoods[c].members)
      if (!covered[u]) {
        covered[u] = 1;
        ++covered_count;
        for (std::size_t d : containing[u]) ++overlap[d];
      }
  };

  std::optional<std::size_t> seed;
  for (std::size_t c = 0; c < count; ++c)
    if (static_cast<Index>(hoods[c].size()) > p && (!seed || hoods[c].size() > hoods[*seed].size())) seed = c;
  if (!seed) throw PatchError("mds_map_p: every patch has at most p nodes; increase the hop count");

  std::vector<MergeRecord> plan{{static_cast<Index>(*seed), 0}};
  cover(*seed);
  while (covered_count < n) {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < count; ++c) {
      if (processed[c] || static_cast<Index>(hoods[c].size()) <= p || overlap[c] >= hoods[c].size()) continue;
      if (!best || overlap[c] > overlap[*best]) best = c;
    }
    if (!best || static_cast<Index>(overlap[*best]) < p + 1) {
      std::string list;
      Index shown = 0;
      for (Index u = 0; u < n; ++u)
        if (!covered[u]) {
          if (shown < 20) list += (shown ? "," : "") + std::to_string(u);
          ++shown;
        }
      if (shown > 20) list += ",...";
      throw PatchError("mds_map_p: " + std::to_string(n - covered_count) +
                       " nodes cannot be reached by a mergeable patch (uncovered: " + list +
                       "); increase the hop count");
    }
    plan.push_back({static_cast<Index>(*best), overlap[*best]});
    cover(*best);
  }
  return plan;
}

/// Patch-stitching embedding: one hop neighborhood per center, embedded by
/// shortest-path completion + classical scaling (+ SMACOF), stitched by
/// Procrustes in overlap order, optionally refined globally by SMACOF.
///
/// Patches that would add no new node cannot change the map and are skipped
/// without being embedded; the merge order is fixed before any embedding.
inline MdsMapResult mds_map_p_detailed(const DissimilarityGraph& g, int h, Index p, const MdsMapOptions& opt = {}) {
  const Index n = g.size();
  if (h < 1) throw InvalidArgument("mds_map_p: h must be >= 1");
  if (p < 1) throw InvalidArgument("mds_map_p: p must be >= 1");
  if (opt.center_stride < 1) throw InvalidArgument("mds_map_p: center_stride must be >= 1");
  if (n < p + 1) throw InvalidArgument("mds_map_p: need at least p+1 nodes");
  if (!is_connected(g)) throw DisconnectedGraph("mds_map_p: graph is disconnected");

  std::vector<Index> centers;
  for (Index v = 0; v < n; v += opt.center_stride) centers.push_back(v);
  std::vector<HopNeighborhood> hoods(centers.size());
  parallel_for(
      centers.size(), [&](std::size_t c) { hoods[c] = hop_neighborhood(g, centers[c], h); }, opt.threads);

  // plan[k].center indexes `hoods` here, not the graph.
  const std::vector<MergeRecord> plan = plan_merge_order(hoods, n, p);

  // Patches are embedded in parallel batches and merged in plan order, so at
  // most one batch of local matrices is alive at a time.
  const std::size_t batch = std::max<std::size_t>(1, opt.threads ? opt.threads : thread_count());
  std::optional<GlobalMap> gm;
  for (std::size_t start = 0; start < plan.size(); start += batch) {
    const std::size_t len = std::min(batch, plan.size() - start);
    std::vector<std::optional<Patch>> patches(len);
    parallel_for(
        len,
        [&](std::size_t k) {
          const auto& hood = hoods[static_cast<std::size_t>(plan[start + k].center)];
          patches[k] = build_patch(g, hood, p, opt.refine_patches, opt.patch_smacof);
        },
        opt.threads);
    for (std::size_t k = 0; k < len; ++k) {
      if (!gm)
        gm = GlobalMap::seeded(n, *patches[k]);
      else
        gm->merge(*patches[k]);
    }
  }
  Configuration y = gm->to_configuration();
  if (opt.final_refine) y = smacof(g, y, opt.final_smacof).embedding;
  return {std::move(y), gm->merge_log(), plan.size()};
}

inline Configuration mds_map_p(const DissimilarityGraph& g, int h, Index p, bool refine_patches = true,
                               bool final_refine = false) {
  MdsMapOptions opt;
  opt.refine_patches = refine_patches;
  opt.final_refine = final_refine;
  return mds_map_p_detailed(g, h, p, opt).embedding;
}

}  // namespace stresstune
