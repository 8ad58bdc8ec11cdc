#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stresstune/core.hpp"
#include "stresstune/parallel.hpp"

namespace stresstune {

struct Edge {
  Index i;
  Index j;
  double d;
};

/// Undirected weighted graph; weights are nonnegative dissimilarities.
///
/// Edges are stored with i < j, sorted lexicographically, which fixes the
/// iteration order everywhere downstream (noise draws, CSV output, stress sums).
class DissimilarityGraph {
 public:
  struct Neighbor {
    Index node;
    double d;
  };

  DissimilarityGraph(Index n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 0) throw InvalidArgument("graph: negative node count");
    for (auto& e : edges_) {
      if (e.i < 0 || e.j < 0 || e.i >= n_ || e.j >= n_)
        throw InvalidArgument("graph: edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                              ") has node index outside [0," + std::to_string(n_) + ")");
      if (e.i == e.j) throw InvalidArgument("graph: self-loop at node " + std::to_string(e.i));
      if (!std::isfinite(e.d) || e.d < 0)
        throw InvalidArgument("graph: weight on (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                              ") must be finite and >= 0");
      if (e.i > e.j) std::swap(e.i, e.j);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (std::size_t k = 1; k < edges_.size(); ++k)
      if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j)
        throw InvalidArgument("graph: duplicate edge (" + std::to_string(edges_[k].i) + "," +
                              std::to_string(edges_[k].j) + ")");
    build_adjacency();
  }

  Index size() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Neighbors of v sorted by node index.
  std::span<const Neighbor> neighbors(Index v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  Index degree(Index v) const { return static_cast<Index>(offsets_[v + 1] - offsets_[v]); }

  std::optional<double> weight(Index i, Index j) const {
    auto nb = neighbors(i);
    auto it = std::lower_bound(nb.begin(), nb.end(), j,
                               [](const Neighbor& a, Index node) { return a.node < node; });
    if (it != nb.end() && it->node == j) return it->d;
    return std::nullopt;
  }

  bool is_complete() const {
    return static_cast<long double>(edges_.size()) ==
           static_cast<long double>(n_) * static_cast<long double>(n_ - 1) / 2.0L;
  }

  /// Subgraph induced by `members`; local node r corresponds to members[r].
  DissimilarityGraph induced_subgraph(std::span<const Index> members) const {
    std::vector<Index> local(n_, -1);
    for (std::size_t r = 0; r < members.size(); ++r) local[members[r]] = static_cast<Index>(r);
    std::vector<Edge> sub;
    for (std::size_t r = 0; r < members.size(); ++r) {
      for (const auto& nb : neighbors(members[r])) {
        const Index s = local[nb.node];
        if (s > static_cast<Index>(r)) sub.push_back({static_cast<Index>(r), s, nb.d});
      }
    }
    return DissimilarityGraph(static_cast<Index>(members.size()), std::move(sub));
  }

  /// Same topology, new weights (given in edges() order).
  DissimilarityGraph with_weights(const std::vector<double>& w) const {
    if (w.size() != edges_.size()) throw InvalidArgument("with_weights: size mismatch");
    std::vector<Edge> e = edges_;
    for (std::size_t k = 0; k < e.size(); ++k) e[k].d = w[k];
    return DissimilarityGraph(n_, std::move(e));
  }

 private:
  void build_adjacency() {
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.i + 1];
      ++offsets_[e.j + 1];
    }
    for (Index v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
    adj_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      adj_[fill[e.i]++] = {e.j, e.d};
      adj_[fill[e.j]++] = {e.i, e.d};
    }
    for (Index v = 0; v < n_; ++v)
      std::sort(adj_.begin() + offsets_[v], adj_.begin() + offsets_[v + 1],
                [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }

  Index n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adj_;
};

/// Nodes within h hops of a center, sorted ascending (center included).
struct HopNeighborhood {
  Index center;
  int h;
  std::vector<Index> members;

  bool contains(Index v) const { return std::binary_search(members.begin(), members.end(), v); }
  std::size_t size() const { return members.size(); }
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// k-NN graph from an arbitrary distance function; union symmetrization,
/// ties broken by lower neighbor index.
inline DissimilarityGraph knn_graph_from(Index n, int k, const std::function<double(Index, Index)>& dist) {
  if (k < 1) throw InvalidArgument("knn_graph: k must be >= 1");
  if (n <= k)
    throw InvalidArgument("knn_graph: need more than k=" + std::to_string(k) + " points, got " +
                          std::to_string(n));
  std::vector<std::vector<Index>> nearest(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t si) {
    const Index i = static_cast<Index>(si);
    std::vector<std::pair<double, Index>> cand;
    cand.reserve(n - 1);
    for (Index j = 0; j < n; ++j)
      if (j != i) cand.emplace_back(dist(i, j), j);
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int r = 0; r < k; ++r) nearest[i].push_back(cand[r].second);
  });
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j : nearest[i]) {
      // Each unordered pair is emitted once: by the lower index, or by the
      // higher one when the lower index did not pick it.
      const Index lo = std::min(i, j), hi = std::max(i, j);
      const bool lo_picked = std::find(nearest[lo].begin(), nearest[lo].end(), hi) != nearest[lo].end();
      if (i == lo || !lo_picked) edges.push_back({lo, hi, dist(lo, hi)});
    }
  }
  return DissimilarityGraph(n, std::move(edges));
}

inline DissimilarityGraph knn_graph(const Configuration& config, int k) {
  const Matrix& x = config.points();
  return knn_graph_from(config.size(), k, [&x](Index i, Index j) { return (x.row(i) - x.row(j)).norm(); });
}

inline DissimilarityGraph knn_graph(const DenseSymmetricMatrix& dist, int k) {
  if (!dist.is_complete()) throw InvalidArgument("knn_graph: distance matrix has missing entries");
  return knn_graph_from(dist.order(), k, [&dist](Index i, Index j) { return dist(i, j); });
}

/// Edge iff Euclidean distance <= r.
inline DissimilarityGraph radius_graph(const Configuration& config, double r) {
  if (!(r > 0)) throw InvalidArgument("radius_graph: r must be > 0");
  const Matrix& x = config.points();
  const Index n = config.size();
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double d = (x.row(i) - x.row(j)).norm();
      if (d <= r) edges.push_back({i, j, d});
    }
  return DissimilarityGraph(n, std::move(edges));
}

/// Longest edge of a Euclidean minimum spanning tree (Prim, O(n^2)): the
/// smallest r for which radius_graph(config, r) is connected.
inline double min_connectivity_radius(const Configuration& config) {
  const Index n = config.size();
  if (n < 2) throw InvalidArgument("min_connectivity_radius: need at least two points");
  const Matrix& x = config.points();
  std::vector<double> best(n, kInfinity);
  std::vector<char> in_tree(n, 0);
  best[0] = 0;
  double longest = 0;
  for (Index it = 0; it < n; ++it) {
    Index u = -1;
    for (Index v = 0; v < n; ++v)
      if (!in_tree[v] && (u < 0 || best[v] < best[u])) u = v;
    in_tree[u] = 1;
    longest = std::max(longest, best[u]);
    for (Index v = 0; v < n; ++v)
      if (!in_tree[v]) best[v] = std::min(best[v], (x.row(u) - x.row(v)).norm());
  }
  return longest;
}

// ---------------------------------------------------------------------------
// Traversal
// ---------------------------------------------------------------------------

inline HopNeighborhood hop_neighborhood(const DissimilarityGraph& g, Index v, int h) {
  if (h < 1) throw InvalidArgument("hop_neighborhood: h must be >= 1");
  if (v < 0 || v >= g.size()) throw InvalidArgument("hop_neighborhood: node out of range");
  std::vector<int> depth(g.size(), -1);
  std::vector<Index> frontier{v}, members{v};
  depth[v] = 0;
  for (int level = 1; level <= h && !frontier.empty(); ++level) {
    std::vector<Index> next;
    for (Index u : frontier)
      for (const auto& nb : g.neighbors(u))
        if (depth[nb.node] < 0) {
          depth[nb.node] = level;
          next.push_back(nb.node);
          members.push_back(nb.node);
        }
    frontier = std::move(next);
  }
  std::sort(members.begin(), members.end());
  return {v, h, std::move(members)};
}

/// Single-source shortest paths (binary-heap Dijkstra).
inline std::vector<double> dijkstra(const DissimilarityGraph& g, Index source) {
  std::vector<double> dist(g.size(), kInfinity);
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    for (const auto& nb : g.neighbors(u)) {
      const double alt = du + nb.d;
      if (alt < dist[nb.node]) {
        dist[nb.node] = alt;
        heap.emplace(alt, nb.node);
      }
    }
  }
  return dist;
}

/// Reference all-pairs shortest paths, O(n^3).
inline DenseSymmetricMatrix floyd_warshall(const DissimilarityGraph& g) {
  const Index n = g.size();
  Matrix d = Matrix::Constant(n, n, kInfinity);
  for (Index i = 0; i < n; ++i) d(i, i) = 0;
  for (const auto& e : g.edges()) {
    d(e.i, e.j) = std::min(d(e.i, e.j), e.d);
    d(e.j, e.i) = d(e.i, e.j);
  }
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j) {
      const double dkj = d(k, j);
      if (dkj == kInfinity) continue;
      for (Index i = 0; i < n; ++i) {
        const double alt = d(i, k) + dkj;
        if (alt < d(i, j)) d(i, j) = alt;
      }
    }
  return DenseSymmetricMatrix(std::move(d));
}

/// All-pairs shortest paths by per-source Dijkstra (parallel over sources).
/// Unreachable pairs hold +infinity. Entry (i,j), i<j, comes from source i.
inline DenseSymmetricMatrix all_pairs_shortest_paths(const DissimilarityGraph& g) {
  const Index n = g.size();
  Matrix d(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t s) {
    const auto row = dijkstra(g, static_cast<Index>(s));
    for (Index j = 0; j < n; ++j) d(static_cast<Index>(s), j) = row[j];
  });
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) d(j, i) = d(i, j);
  return DenseSymmetricMatrix(std::move(d));
}

/// Components ordered by their smallest node; members ascending.
inline std::vector<std::vector<Index>> connected_components(const DissimilarityGraph& g) {
  std::vector<char> seen(g.size(), 0);
  std::vector<std::vector<Index>> comps;
  for (Index s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    std::vector<Index> comp{s}, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      Index u = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(u))
        if (!seen[nb.node]) {
          seen[nb.node] = 1;
          comp.push_back(nb.node);
          stack.push_back(nb.node);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline bool is_connected(const DissimilarityGraph& g) {
  return g.size() <= 1 || connected_components(g).size() == 1;
}

}  // namespace stresstune
