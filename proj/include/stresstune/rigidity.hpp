#pragma once

#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "stresstune/embed.hpp"
#include "stresstune/graph.hpp"

namespace stresstune {

/// Vertex ordering whose first p+1 vertices form a clique and where every
/// later vertex has at least p+1 neighbors among its predecessors.
struct TrilaterativeOrdering {
  std::vector<Index> order;
  Index p;

  std::span<const Index> seed_clique() const { return {order.data(), static_cast<std::size_t>(p + 1)}; }
};

inline bool is_trilaterative_ordering(const DissimilarityGraph& g, const TrilaterativeOrdering& t) {
  const Index n = g.size();
  if (t.p < 1 || static_cast<Index>(t.order.size()) != n || n < t.p + 1) return false;
  std::vector<Index> position(n, -1);
  for (std::size_t k = 0; k < t.order.size(); ++k) {
    const Index v = t.order[k];
    if (v < 0 || v >= n || position[v] >= 0) return false;
    position[v] = static_cast<Index>(k);
  }
  for (Index a = 0; a <= t.p; ++a)
    for (Index b = a + 1; b <= t.p; ++b)
      if (!g.weight(t.order[a], t.order[b])) return false;
  for (Index k = t.p + 1; k < n; ++k) {
    Index earlier = 0;
    for (const auto& nb : g.neighbors(t.order[k]))
      if (position[nb.node] < k) ++earlier;
    if (earlier < t.p + 1) return false;
  }
  return true;
}

struct OrderingOptions {
  std::size_t seed_cap = 10000;
  /// Once a covering seed is found, this many further seeds are scored and
  /// the best-shaped covering one is kept (0: first covering seed).
  std::size_t seed_candidates = 32;
};

struct OrderingSearch {
  std::optional<TrilaterativeOrdering> ordering;
  std::size_t seeds_tried = 0;
  bool seed_cap_reached = false;  // gave up before exhausting seed cliques
};

namespace detail {

// Greedy closure: repeatedly place the vertex with the most placed neighbors
// among those with >= p+1 (ties: lowest index). Better-supported vertices go
// first, which keeps sequential trilateration well conditioned. Any ready
// vertex stays ready, so the closed set does not depend on this choice and
// one pass per seed suffices.
inline std::vector<Index> trilateration_closure(const DissimilarityGraph& g, std::span<const Index> seed, Index p) {
  const Index n = g.size();
  std::vector<Index> count(n, 0);
  std::vector<char> placed(n, 0);
  using Item = std::pair<Index, Index>;  // (support, -vertex)
  std::priority_queue<Item> ready;
  std::vector<Index> order;
  order.reserve(n);
  auto place = [&](Index v) {
    placed[v] = 1;
    order.push_back(v);
    for (const auto& nb : g.neighbors(v))
      if (!placed[nb.node] && ++count[nb.node] >= p + 1) ready.emplace(count[nb.node], -nb.node);
  };
  for (Index v : seed) placed[v] = 1;
  for (Index v : seed) {
    placed[v] = 0;
    place(v);
  }
  while (!ready.empty()) {
    const auto [c, neg] = ready.top();
    ready.pop();
    if (!placed[-neg] && c == count[-neg]) place(-neg);
  }
  return order;
}

// Shape of a seed clique: ratio of the p-th to the first eigenvalue of its
// classical-scaling Gram matrix. Near 0 for (almost) flat seeds.
inline double seed_shape(const DissimilarityGraph& g, std::span<const Index> seed, Index p) {
  const Index m = static_cast<Index>(seed.size());
  Matrix d = Matrix::Zero(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = a + 1; b < m; ++b) d(a, b) = d(b, a) = *g.weight(seed[a], seed[b]);
  const EigenPairs eig = top_eigenpairs(scaling_gram(DenseSymmetricMatrix(std::move(d))), p);
  return eig.values(0) > 0 ? eig.values(p - 1) / eig.values(0) : 0.0;
}

// Enumerates (size)-cliques in lexicographic order; visit returns false to stop.
inline bool enumerate_cliques(const DissimilarityGraph& g, Index size, std::vector<Index>& clique,
                              const std::vector<Index>& candidates, const std::function<bool()>& visit) {
  if (static_cast<Index>(clique.size()) == size) return visit();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Index v = candidates[k];
    std::vector<Index> next;
    for (std::size_t r = k + 1; r < candidates.size(); ++r)
      if (g.weight(v, candidates[r])) next.push_back(candidates[r]);
    if (static_cast<Index>(clique.size() + 1 + next.size()) < size) continue;
    clique.push_back(v);
    const bool go_on = enumerate_cliques(g, size, clique, next, visit);
    clique.pop_back();
    if (!go_on) return false;
  }
  return true;
}

}  // namespace detail

/// Tries seed (p+1)-cliques in lexicographic order until one's greedy closure
/// covers every vertex, then scores up to opt.seed_candidates further seeds
/// and keeps the covering seed with the best shape (see seed_shape).
inline OrderingSearch search_trilaterative_ordering(const DissimilarityGraph& g, Index p,
                                                    const OrderingOptions& opt = {}) {
  if (p < 1) throw InvalidArgument("find_trilaterative_ordering: p must be >= 1");
  const Index n = g.size();
  if (n < p + 1) throw InvalidArgument("find_trilaterative_ordering: need n >= p+1");
  OrderingSearch out;
  double best_shape = -1;
  std::size_t extra = 0;
  bool done = false;
  std::vector<Index> clique;
  for (Index v = 0; v < n && !done; ++v) {
    std::vector<Index> higher;
    for (const auto& nb : g.neighbors(v))
      if (nb.node > v) higher.push_back(nb.node);
    if (static_cast<Index>(higher.size()) < p) continue;
    clique.assign(1, v);
    detail::enumerate_cliques(g, p + 1, clique, higher, [&] {
      if (out.ordering && extra >= opt.seed_candidates) {
        done = true;
        return false;
      }
      if (out.seeds_tried >= opt.seed_cap) {
        out.seed_cap_reached = !out.ordering;
        done = true;
        return false;
      }
      ++out.seeds_tried;
      if (out.ordering) ++extra;
      const double shape = detail::seed_shape(g, clique, p);
      if (out.ordering && shape <= best_shape) return true;
      auto order = detail::trilateration_closure(g, clique, p);
      if (static_cast<Index>(order.size()) == n) {
        out.ordering = TrilaterativeOrdering{std::move(order), p};
        best_shape = shape;
      }
      return true;
    });
  }
  return out;
}

inline std::optional<TrilaterativeOrdering> find_trilaterative_ordering(const DissimilarityGraph& g, Index p,
                                                                        const OrderingOptions& opt = {}) {
  return search_trilaterative_ordering(g, p, opt).ordering;
}

/// Classical scaling of the seed clique, then each later vertex trilaterated
/// from all of its already placed neighbors. Rows follow node indices.
inline Configuration sequential_trilateration(const DissimilarityGraph& g, const TrilaterativeOrdering& t, Index p) {
  if (t.p != p) throw InvalidArgument("sequential_trilateration: ordering built for a different dimension");
  if (!is_trilaterative_ordering(g, t))
    throw InvalidArgument("sequential_trilateration: not a trilaterative ordering of this graph");
  const Index n = g.size();
  Matrix d(p + 1, p + 1);
  for (Index a = 0; a <= p; ++a)
    for (Index b = 0; b <= p; ++b) d(a, b) = a == b ? 0.0 : *g.weight(t.order[a], t.order[b]);
  const DenseSymmetricMatrix seed_d(std::move(d));
  const EigenPairs eig = top_eigenpairs(scaling_gram(seed_d), p);
  if (!(eig.values(p - 1) > 1e-10 * eig.values(0))) {
    std::string nodes;
    for (Index a = 0; a <= p; ++a) nodes += (a ? ", " : "") + std::to_string(t.order[a]);
    throw DegenerateGeometry("sequential_trilateration: seed clique (" + nodes + ") is affinely degenerate");
  }
  const Configuration seed = classical_scaling(seed_d, p);

  Matrix y = Matrix::Zero(n, p);
  std::vector<char> placed(n, 0);
  for (Index a = 0; a <= p; ++a) {
    y.row(t.order[a]) = seed.point(a);
    placed[t.order[a]] = 1;
  }
  for (Index k = p + 1; k < n; ++k) {
    const Index v = t.order[k];
    std::vector<Index> marks;
    std::vector<double> dist;
    for (const auto& nb : g.neighbors(v))
      if (placed[nb.node]) {
        marks.push_back(nb.node);
        dist.push_back(nb.d);
      }
    Matrix lm(static_cast<Index>(marks.size()), p);
    for (std::size_t r = 0; r < marks.size(); ++r) lm.row(static_cast<Index>(r)) = y.row(marks[r]);
    try {
      y.row(v) = trilaterate(Configuration(std::move(lm)), dist).transpose();
    } catch (const DegenerateGeometry&) {
      throw DegenerateGeometry("sequential_trilateration: landmarks for node " + std::to_string(v) +
                               " are affinely degenerate");
    }
    placed[v] = 1;
  }
  return Configuration(std::move(y));
}

}  // namespace stresstune
