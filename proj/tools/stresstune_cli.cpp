// stresstune: generate graphs, run embeddings and hop sweeps, write reports.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stresstune/stresstune.hpp"

namespace fs = std::filesystem;
using namespace stresstune;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const CLI::Validator kNoiseRange(
    [](std::string& s) -> std::string {
      double v = 0;
      try {
        v = io::parse_double(s, "--sigma");
      } catch (const std::exception&) {
        return "not a number: " + s;
      }
      if (!(v >= 0 && v < 1)) return "noise sigma must be in [0, 1), got " + s;
      return {};
    },
    "in [0, 1)", "NoiseRange");

void write_json(const fs::path& p, const json& j) { io::write_file_atomic(p, j.dump(2) + "\n"); }

void ensure_dir(const fs::path& d) {
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw Error("cannot create directory " + d.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string shape = "hollow";
  Index n = 1200;
  int k = presets::kSyntheticNeighbors;
  std::optional<double> sigma;
  std::uint64_t seed = 1;
  double jitter = presets::kJitterFraction;
  std::string out;
  std::string manifold;
  std::optional<double> alpha;
  double ambient_noise = 0.1;
  double radius_multiple = kDefaultRadiusMultiple;
};

int cmd_generate(const GenerateArgs& a) {
  const auto kind = parse_shape(a.shape);
  const fs::path out(a.out);
  ensure_dir(out);
  const std::uint64_t edge_seed = a.seed + 1000, ambient_seed = a.seed + 2000;
  const GridSample sample = generate_shape_sample(DomainShape::make(kind), a.n, a.jitter, a.seed);

  json meta;
  meta["command"] = "generate";
  meta["shape"] = std::string(shape_name(kind));
  meta["n_target"] = a.n;
  meta["jitter"] = a.jitter;
  meta["seed"] = a.seed;
  meta["edge_noise_seed"] = edge_seed;

  std::optional<Configuration> truth;
  std::optional<DissimilarityGraph> g;
  if (a.manifold.empty()) {
    const double sigma = a.sigma.value_or(presets::kNoiseSigma);
    truth = sample.points;
    g = apply_multiplicative_noise(knn_graph(*truth, a.k), sigma, edge_seed);
    meta["spacing"] = sample.spacing;
    meta["graph"] = "knn";
    meta["k"] = a.k;
    meta["sigma"] = sigma;
  } else {
    // Manifold mode: the graph is the radius neighborhood graph of the lifted
    // points; multiplicative noise is off unless --sigma is given.
    const SurfaceKind surface = a.manifold == "s" ? SurfaceKind::s_surface : SurfaceKind::swiss_roll;
    const double alpha =
        a.alpha.value_or(surface == SurfaceKind::s_surface ? presets::kSSurfaceAlpha : presets::kSwissRollAlpha);
    const Matrix& x0 = sample.points.points();
    const double width = x0.col(0).maxCoeff() - x0.col(0).minCoeff();
    const double spacing = sample.spacing / width;
    truth = fit_to_lift_domain(sample.points, surface);
    const Configuration lifted =
        surface == SurfaceKind::s_surface ? lift_s_surface(*truth, alpha) : lift_swiss_roll(*truth, alpha);
    const double ambient_sigma = a.ambient_noise * spacing;
    const Configuration z = add_gaussian_noise(lifted, ambient_sigma, ambient_seed);
    const double r = default_radius(z, a.radius_multiple);
    const double sigma = a.sigma.value_or(0.0);
    g = apply_multiplicative_noise(neighborhood_graph(z, r), sigma, edge_seed);
    io::write_file_atomic(out / "points3d.csv", io::configuration_csv(z));
    meta["spacing"] = spacing;
    meta["graph"] = "radius";
    meta["manifold"] = a.manifold == "s" ? "s" : "swiss";
    meta["alpha"] = alpha;
    meta["ambient_noise"] = a.ambient_noise;
    meta["ambient_sigma"] = ambient_sigma;
    meta["ambient_noise_seed"] = ambient_seed;
    meta["radius_multiple"] = a.radius_multiple;
    meta["radius"] = r;
    meta["sigma"] = sigma;
  }
  meta["n"] = truth->size();
  meta["edges"] = g->edge_count();
  io::write_file_atomic(out / "config.csv", io::configuration_csv(*truth));
  io::write_file_atomic(out / "graph.csv", io::edge_list_csv(*g));
  write_json(out / "meta.json", meta);
  std::cout << "wrote " << truth->size() << " points, " << g->edge_count() << " edges to " << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string graph;
  Index p = 2;
  std::vector<int> hops{1, 2, 3, 5, 10};
  std::string truth;
  std::string out;
  bool no_refine_patches = false;
  bool final_refine = false;
  bool record_timing = false;
  std::string title = "hop sweep";
};

int cmd_sweep(const SweepArgs& a) {
  std::optional<Configuration> truth;
  if (!a.truth.empty()) truth = io::read_configuration(a.truth);
  const auto g = truth ? io::read_edge_list(a.graph, truth->size()) : io::read_edge_list(a.graph);
  if (truth && truth->dim() != a.p)
    throw UsageError("--truth has dimension " + std::to_string(truth->dim()) + " but --p is " + std::to_string(a.p));
  SweepOptions opt;
  opt.keep_embeddings = true;
  opt.mds.refine_patches = !a.no_refine_patches;
  opt.mds.final_refine = a.final_refine;
  const SweepReport rep = sweep_hops(g, a.p, a.hops, truth, opt);

  const fs::path out(a.out);
  ensure_dir(out);
  write_json(out / "sweep.json", io::sweep_json(rep, a.record_timing));
  io::write_file_atomic(out / "sweep.csv", io::sweep_csv(rep, a.record_timing));
  io::write_file_atomic(out / "sweep.svg", plot::sweep_svg(rep, a.title));
  for (const auto& r : rep.rows)
    if (r.embedding)
      io::write_file_atomic(out / ("embedding_h" + std::to_string(r.h) + ".csv"), io::configuration_csv(*r.embedding));

  for (const auto& r : rep.rows) {
    if (r.failed) {
      std::printf("h=%-3d failed: %s\n", r.h, r.failure.c_str());
      continue;
    }
    std::printf("h=%-3d stress=%.6g", r.h, r.stress);
    if (r.embedding_error) std::printf(" error=%.6g scale=%.4f", *r.embedding_error, *r.scale_ratio);
    std::printf("\n");
  }
  std::printf("selected h=%d\n", rep.selected_h);
  return 0;
}

// ---------------------------------------------------------------------------
// embed
// ---------------------------------------------------------------------------

struct EmbedArgs {
  std::string method;
  std::string graph;
  std::string points;
  std::string truth;
  Index p = 2;
  int h = 2;
  std::optional<double> radius;
  double radius_multiple = kDefaultRadiusMultiple;
  bool no_refine_patches = false;
  bool final_refine = false;
  std::string out;
};

DenseSymmetricMatrix complete_matrix(const DissimilarityGraph& g) {
  if (!g.is_complete()) throw UsageError("method cs needs a complete graph (use mdsd for sparse graphs)");
  Matrix d = Matrix::Zero(g.size(), g.size());
  for (const auto& e : g.edges()) d(e.i, e.j) = d(e.j, e.i) = e.d;
  return DenseSymmetricMatrix(std::move(d));
}

int cmd_embed(const EmbedArgs& a) {
  MdsMapOptions mopt;
  mopt.refine_patches = !a.no_refine_patches;
  mopt.final_refine = a.final_refine;
  std::optional<Configuration> truth;
  if (!a.truth.empty()) truth = io::read_configuration(a.truth);

  std::optional<Configuration> y;
  if (a.method == "isomap-local") {
    if (a.points.empty()) throw UsageError("method isomap-local needs --points");
    const Configuration z = io::read_configuration(a.points);
    const double r = a.radius.value_or(default_radius(z, a.radius_multiple));
    y = local_isomap(z, r, a.h, a.p, mopt);
  } else {
    if (a.graph.empty()) throw UsageError("method " + a.method + " needs --graph");
    const auto g = truth ? io::read_edge_list(a.graph, truth->size()) : io::read_edge_list(a.graph);
    if (a.method == "cs") {
      y = classical_scaling(complete_matrix(g), a.p);
    } else if (a.method == "mdsd") {
      y = mds_d(g, a.p);
    } else if (a.method == "mdsmapp") {
      y = mds_map_p_detailed(g, a.h, a.p, mopt).embedding;
    } else {
      const auto search = search_trilaterative_ordering(g, a.p);
      if (!search.ordering)
        throw Error(std::string("graph has no trilaterative ordering") +
                    (search.seed_cap_reached ? " (seed cap reached)" : ""));
      y = sequential_trilateration(g, *search.ordering, a.p);
    }
  }
  io::write_file_atomic(a.out, io::configuration_csv(*y));
  if (truth) {
    const auto rep = alignment_report(*y, *truth);
    json j;
    j["embedding_error"] = rep.error;
    j["normalized_rmse"] = rep.normalized_rmse;
    j["scale_ratio"] = scale_ratio(*y, *truth);
    std::cout << j.dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// align
// ---------------------------------------------------------------------------

struct AlignArgs {
  std::string embedding;
  std::string truth;
  std::string out;
};

int cmd_align(const AlignArgs& a) {
  const Configuration y = io::read_configuration(a.embedding);
  const Configuration x = io::read_configuration(a.truth);
  if (y.size() != x.size() || y.dim() != x.dim())
    throw UsageError("embedding and truth differ in size or dimension");
  const auto rep = alignment_report(y, x);
  const Configuration aligned = procrustes(y, x, true).apply(y);
  const fs::path out(a.out);
  ensure_dir(out);
  io::write_file_atomic(out / "aligned.csv", io::configuration_csv(aligned));
  json j;
  j["n"] = x.size();
  j["embedding_error"] = rep.error;
  j["normalized_rmse"] = rep.normalized_rmse;
  j["scale_ratio"] = scale_ratio(y, x);
  write_json(out / "align.json", j);
  std::cout << j.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// cities
// ---------------------------------------------------------------------------

struct CitiesArgs {
  std::string input;
  int k = presets::kCityNeighbors;
  std::string out;
  std::string truth_out;
  double radius_km = presets::kEarthRadiusKm;
};

int cmd_cities(const CitiesArgs& a) {
  const CityTable cities = io::load_cities(a.input);
  if (cities.size() < 2) throw Error(a.input + ": need at least two cities");
  const auto d = haversine_matrix(cities, a.radius_km);
  // k is capped at n-1 so small tables give the complete graph
  const int k = std::min<int>(a.k, static_cast<int>(cities.size()) - 1);
  const auto g = knn_graph(d, k);
  io::write_file_atomic(a.out, io::edge_list_csv(g));
  if (!a.truth_out.empty()) io::write_file_atomic(a.truth_out, io::configuration_csv(project_cities(cities, a.radius_km)));
  std::cout << "wrote " << g.edge_count() << " edges over " << cities.size() << " cities to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hop-count tuning for patch-stitching embeddings"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Sample a shape, build a noisy graph, write config/graph/meta");
  gen->add_option("--shape", ga.shape, "rectangle|hollow|cshape|hshape")->capture_default_str();
  gen->add_option("--n", ga.n, "Target number of points")->capture_default_str()->check(CLI::Range(4, 10000000));
  gen->add_option("--k", ga.k, "Nearest neighbors per point")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--sigma", ga.sigma, "Multiplicative edge noise level, in [0, 1)")->check(kNoiseRange);
  gen->add_option("--seed", ga.seed, "Random seed")->capture_default_str();
  gen->add_option("--jitter", ga.jitter, "Jitter as a fraction of grid spacing, in [0, 0.5)")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.4999999));
  gen->add_option("--out", ga.out, "Output directory")->required();
  gen->add_option("--manifold", ga.manifold, "Lift to a surface: s|swiss")->check(CLI::IsMember({"s", "swiss"}));
  gen->add_option("--alpha", ga.alpha, "Surface curvature parameter")->check(CLI::PositiveNumber);
  gen->add_option("--ambient-noise", ga.ambient_noise, "Gaussian noise on lifted points, in grid spacings")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--radius-multiple", ga.radius_multiple, "Neighborhood radius over the connectivity radius")
      ->capture_default_str()
      ->check(CLI::Range(1.0, 1e6));

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Run the embedding for several hop counts and select by stress");
  sweep->add_option("--graph", sa.graph, "Edge list CSV (i,j,d)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--p", sa.p, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--hops", sa.hops, "Comma-separated hop counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--truth", sa.truth, "Ground-truth configuration CSV")->check(CLI::ExistingFile);
  sweep->add_option("--out", sa.out, "Output directory")->required();
  sweep->add_flag("--no-refine-patches", sa.no_refine_patches, "Skip SMACOF on each patch");
  sweep->add_flag("--final-refine", sa.final_refine, "SMACOF on the stitched embedding");
  sweep->add_flag("--record-timing", sa.record_timing, "Write wall times (outputs stop being reproducible)");
  sweep->add_option("--title", sa.title, "Plot title")->capture_default_str();

  EmbedArgs ea;
  auto* embed = app.add_subcommand("embed", "Run one embedding method");
  embed->add_option("--method", ea.method, "cs|mdsd|mdsmapp|seqtrilat|isomap-local")
      ->required()
      ->check(CLI::IsMember({"cs", "mdsd", "mdsmapp", "seqtrilat", "isomap-local"}));
  embed->add_option("--graph", ea.graph, "Edge list CSV")->check(CLI::ExistingFile);
  embed->add_option("--points", ea.points, "Ambient point cloud CSV (isomap-local)")->check(CLI::ExistingFile);
  embed->add_option("--truth", ea.truth, "Ground truth; prints alignment metrics")->check(CLI::ExistingFile);
  embed->add_option("--p", ea.p, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  embed->add_option("--hop", ea.h, "Hop count (mdsmapp, isomap-local)")->capture_default_str()->check(CLI::PositiveNumber);
  embed->add_option("--radius", ea.radius, "Neighborhood radius (isomap-local)")->check(CLI::PositiveNumber);
  embed->add_option("--radius-multiple", ea.radius_multiple, "Radius over the connectivity radius when --radius is absent")
      ->capture_default_str()
      ->check(CLI::Range(1.0, 1e6));
  embed->add_flag("--no-refine-patches", ea.no_refine_patches, "Skip SMACOF on each patch");
  embed->add_flag("--final-refine", ea.final_refine, "SMACOF on the stitched embedding");
  embed->add_option("--out", ea.out, "Output configuration CSV")->required();

  AlignArgs aa;
  auto* align = app.add_subcommand("align", "Align an embedding to ground truth and report the error");
  align->add_option("--embedding", aa.embedding, "Embedding CSV")->required()->check(CLI::ExistingFile);
  align->add_option("--truth", aa.truth, "Ground-truth CSV")->required()->check(CLI::ExistingFile);
  align->add_option("--out", aa.out, "Output directory")->required();

  CitiesArgs ca;
  auto* cities = app.add_subcommand("cities", "Convert a city,lat,lng CSV to a Haversine k-NN graph");
  cities->add_option("--input", ca.input, "City CSV")->required()->check(CLI::ExistingFile);
  cities->add_option("--k", ca.k, "Nearest neighbors")->capture_default_str()->check(CLI::PositiveNumber);
  cities->add_option("--out", ca.out, "Output edge list CSV")->required();
  cities->add_option("--truth-out", ca.truth_out, "Also write a planar reference configuration");
  cities->add_option("--radius-km", ca.radius_km, "Sphere radius")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_generate(ga);
    if (*sweep) return cmd_sweep(sa);
    if (*embed) return cmd_embed(ea);
    if (*align) return cmd_align(aa);
    if (*cities) return cmd_cities(ca);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
