// Small end-to-end run: hollow rectangle, noisy 15-NN graph, hop sweep.
//
//   demo_stitching [n] [seed]

#include <cstdio>
#include <cstdlib>

#include "stresstune/stresstune.hpp"

using namespace stresstune;

int main(int argc, char** argv) {
  const Index n = argc > 1 ? std::atol(argv[1]) : 600;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;

  const Configuration x = generate_shape(DomainShape::make(ShapeKind::hollow_rectangle), n, presets::kJitterFraction, seed);
  const auto g = apply_multiplicative_noise(knn_graph(x, presets::kSyntheticNeighbors), presets::kNoiseSigma, seed + 1000);
  std::printf("%ld points, %zu edges\n", static_cast<long>(x.size()), g.edge_count());

  SweepOptions opt;
  opt.mds.refine_patches = false;
  const auto rep = sweep_hops(g, 2, {1, 2, 3, 5, 10, 15}, x, opt);
  std::printf("%4s %14s %14s %8s\n", "h", "stress", "error", "scale");
  for (const auto& r : rep.rows) {
    if (r.failed) {
      std::printf("%4d  failed (%s)\n", r.h, r.failure.c_str());
      continue;
    }
    std::printf("%4d %14.6g %14.6g %8.4f\n", r.h, r.stress, *r.embedding_error, *r.scale_ratio);
  }
  std::printf("selected h = %d\n", rep.selected_h);
  return 0;
}
