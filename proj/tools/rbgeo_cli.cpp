#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rbgeo/clustering.hpp"
#include "rbgeo/errors.hpp"
#include "rbgeo/evaluation.hpp"
#include "rbgeo/geometry.hpp"
#include "rbgeo/io.hpp"
#include "rbgeo/kernels.hpp"
#include "rbgeo/quantization.hpp"
#include "rbgeo/voronoi.hpp"

namespace fs = std::filesystem;
using namespace rbgeo;
using io::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kNumerical = 4 };

// Flag combinations the parser cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "-" means standard output.
class Output {
 public:
  explicit Output(const std::string& path, bool binary = false) {
    if (path == "-") return;
    if (const auto parent = fs::path(path).parent_path(); !parent.empty())
      fs::create_directories(parent);
    file_.open(path, binary ? std::ios::binary : std::ios::out);
    if (!file_) throw Error("cannot open " + path + " for writing");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> parse_vector(const std::string& text, const char* flag) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    const char* b = item.data();
    const char* e = b + item.size();
    while (b < e && *b == ' ') ++b;
    const auto [p, ec] = std::from_chars(b, e, x);
    if (ec != std::errc() || p != e)
      throw UsageError(std::string(flag) + ": cannot parse '" + item + "' as a number");
    v.push_back(x);
  }
  if (v.empty()) throw UsageError(std::string(flag) + ": expected comma-separated numbers");
  return v;
}

// "1-10", "3,5,8" or a mix of both.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](const std::string& s) {
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size())
      throw UsageError("--seeds: cannot parse '" + s + "'");
    return x;
  };
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(number(item));
      continue;
    }
    const auto lo = number(item.substr(0, dash));
    const auto hi = number(item.substr(dash + 1));
    if (hi < lo) throw UsageError("--seeds: empty range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw UsageError("--seeds: no seeds given");
  return seeds;
}

std::vector<std::string> expand_metrics(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& b : builtin_generator_names()) out.emplace_back(b);
    } else {
      out.push_back(canonical_generator_name(n));
    }
  }
  return out;
}

std::vector<Method> expand_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.insert(out.end(), {Method::kmeans, Method::em, Method::hcpc, Method::hac});
    } else {
      out.push_back(parse_method(n));
    }
  }
  return out;
}

Generator generator_flag(const std::string& name) { return make_generator(name); }

// Runs `fn`, restating domain errors as rows and lines of the CSV it read.
template <class Fn>
auto with_csv_rows(const std::string& path, const PointSet& data, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    if (data.dim() == 0) throw;
    const std::size_t row = e.index() / data.dim();
    const std::size_t col = e.index() % data.dim();
    std::ostringstream os;
    os << path << ": data row " << row + 1 << " (line " << row + 2 << "), column " << col + 1
       << ": value " << data[row][col] << " is outside the domain of the metric";
    throw DomainError(os.str(), e.index());
  }
}

const CLI::Validator kAtLeastOne(
    [](std::string& s) -> std::string {
      long long v = 0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size() || v < 1)
        return "must be an integer >= 1, got '" + s + "'";
      return {};
    },
    "INT>=1");

struct SizeFlag {
  std::size_t width = 512;
  std::size_t height = 512;
};

SizeFlag parse_size(const std::string& text) {
  SizeFlag s;
  const auto x = text.find('x');
  auto number = [&](const std::string& t) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || v == 0)
      throw UsageError("--size: expected N or WxH with positive integers, got '" + text + "'");
    return v;
  };
  if (x == std::string::npos) {
    s.width = s.height = number(text);
  } else {
    s.width = number(text.substr(0, x));
    s.height = number(text.substr(x + 1));
  }
  return s;
}

// Site bounding box padded by a quarter of its extent (at least 1).
BoundingBox default_bbox(const Generator& g, const PointSet& sites) {
  double lo[2] = {kInf, kInf}, hi[2] = {-kInf, -kInf};
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      lo[j] = std::min(lo[j], sites[i][j]);
      hi[j] = std::max(hi[j], sites[i][j]);
    }
  for (std::size_t j = 0; j < 2; ++j) {
    const double pad = std::max(0.25 * (hi[j] - lo[j]), 1.0);
    // Halfway to an open domain bound when the padding would cross it.
    const double a = lo[j] - pad, b = hi[j] + pad;
    lo[j] = a > g.domain.lower ? a : 0.5 * (lo[j] + g.domain.lower);
    hi[j] = b < g.domain.upper ? b : 0.5 * (hi[j] + g.domain.upper);
  }
  return {lo[0], hi[0], lo[1], hi[1]};
}

BoundingBox parse_bbox(const std::string& text) {
  const auto v = parse_vector(text, "--bbox");
  if (v.size() != 4) throw UsageError("--bbox: expected x_lo,x_hi,y_lo,y_hi");
  return {v[0], v[1], v[2], v[3]};
}

void write_json(const std::string& path, const json& j) {
  Output out(path);
  out.stream() << j.dump(2) << "\n";
}

std::string lower_extension(const std::string& path) {
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// ---------------------------------------------------------------------------

struct GenDataArgs {
  std::string spec_file;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
};

int run_gen_data(const GenDataArgs& a) {
  SyntheticSpec spec = a.spec_file.empty() ? default_synthetic_spec() : io::read_spec_file(a.spec_file);
  if (a.seed) spec.seed = *a.seed;
  const PointSet data = generate_dataset(spec);
  Output out(a.out);
  io::write_points_csv(out.stream(), data);
  return kOk;
}

struct ClusterArgs {
  std::string in;
  std::string method = "kmeans";
  std::string metric = "euclidean";
  std::size_t k = 4;
  std::uint64_t seed = 0;
  std::string linkage;
  bool no_consolidate = false;
  std::optional<std::size_t> components;
  bool standardize = false;
  std::size_t restarts = 1;
  std::string out;
  std::string plot;
};

struct ClusterRun {
  ClusteringResult result;
  std::optional<GaussianMixtureModel> model;
};

ClusterRun cluster_points(const ClusterArgs& a, Method method, const Generator& g,
                          const PointSet& data) {
  ClusterRun run;
  switch (method) {
    case Method::kmeans: {
      KMeansOptions o;
      o.standardize = a.standardize;
      o.restarts = a.restarts;
      run.result = kmeans(data, g, a.k, a.seed, o);
      break;
    }
    case Method::em: {
      EmOptions o;
      o.standardize = a.standardize;
      auto [r, m] = em_gmm(data, g, a.k, a.seed, o);
      run.result = std::move(r);
      run.model = std::move(m);
      break;
    }
    case Method::hcpc: {
      HcpcOptions o;
      o.standardize = a.standardize;
      o.consolidate = !a.no_consolidate;
      o.n_components = a.components;
      run.result = hcpc(data, g, a.k, a.seed, o);
      break;
    }
    case Method::hac: {
      HacOptions o;
      o.standardize = a.standardize;
      const Linkage l = a.linkage.empty() ? Linkage::ward : parse_linkage(a.linkage);
      run.result = hac(data, g, a.k, l, o);
      break;
    }
  }
  return run;
}

int run_cluster(const ClusterArgs& a) {
  const Method method = parse_method(a.method);
  if (!a.linkage.empty() && method != Method::hac)
    throw UsageError("--linkage applies to --method hac only (hcpc always uses ward)");
  if ((a.no_consolidate || a.components) && method != Method::hcpc)
    throw UsageError("--no-consolidate and --components apply to --method hcpc only");
  if (a.restarts != 1 && method != Method::kmeans)
    throw UsageError("--restarts applies to --method kmeans only");

  const Generator g = generator_flag(a.metric);
  const PointSet data = io::read_points_csv_file(a.in);
  const auto [result, model] =
      with_csv_rows(a.in, data, [&] { return cluster_points(a, method, g, data); });

  json report = io::to_json(result);
  if (model) report["model"] = io::to_json(*model);
  if (data.has_labels()) {
    const auto e = evaluate(result, data.labels());
    report["evaluation"] = {{"accuracy", e.accuracy},
                            {"adjusted_rand_index", e.adjusted_rand_index},
                            {"normalized_mutual_information", e.normalized_mutual_information},
                            {"matched_sizes", e.sizes},
                            {"matched_centers", io::to_json(e.centers)}};
  }
  if (a.out.empty() || a.out == "-") {
    std::cout << report.dump(2) << "\n";
  } else {
    write_json(a.out + ".json", report);
    Output csv(a.out + ".csv");
    io::write_assignments_csv(csv.stream(), data, result);
  }
  if (!a.plot.empty()) {
    if (data.dim() != 2) throw UsageError("--plot needs 2-D data");
    Output svg(a.plot);
    io::write_scatter_svg(svg.stream(), data, result.assignments, result.centers,
                          std::string(to_string(method)) + ", " + io::embedding_label(g.name));
  }
  return kOk;
}

struct VoronoiArgs {
  std::string sites_file;
  std::string metric = "euclidean";
  std::string flavor = "riemann";
  std::string bbox;
  std::string size = "512";
  std::string out;
  std::string format;
  bool exact = false;
  bool mark_sites = false;
};

int run_voronoi(const VoronoiArgs& a) {
  const Flavor flavor = parse_flavor(a.flavor);
  std::string format = a.format.empty() ? lower_extension(a.out) : "." + a.format;
  if (format != ".pgm" && format != ".svg")
    throw UsageError("output format must be pgm or svg (from --format or the --out extension)");
  if (a.exact && (flavor != Flavor::riemann || format != ".svg"))
    throw UsageError("--exact draws riemann cells and needs svg output");

  const PointSet sites_in = io::read_points_csv_file(a.sites_file);
  if (sites_in.dim() != 2) throw UsageError("Voronoi diagrams are drawn for 2-D sites only");
  const SiteSet sites(generator_flag(a.metric), PointSet(2, sites_in.coords()));
  const BoundingBox box = a.bbox.empty() ? default_bbox(sites.generator(), sites.sites())
                                         : parse_bbox(a.bbox);
  const SizeFlag size = parse_size(a.size);

  Output out(a.out, format == ".pgm");
  if (a.exact) {
    io::write_cells_svg(out.stream(), exact_riemann_cells(sites, box), sites, box,
                        std::max(size.width, size.height));
    return kOk;
  }
  const auto raster = rasterize(sites, flavor, box, size.width, size.height);
  if (format == ".pgm") {
    io::write_pgm(out.stream(), raster);
  } else {
    io::write_raster_svg(out.stream(), raster, a.mark_sites ? &sites.sites() : nullptr);
  }
  return kOk;
}

struct QuantizeArgs {
  std::string in;
  std::string metric = "euclidean";
  std::size_t rate = 0;
  std::uint64_t seed = 0;
  std::size_t max_iters = 200;
  double tol = 1e-8;
  std::string out = "-";
};

int run_quantize(const QuantizeArgs& a) {
  LloydOptions o;
  o.max_iters = a.max_iters;
  o.tol = a.tol;
  const PointSet samples = io::read_points_csv_file(a.in);
  const auto report = with_csv_rows(
      a.in, samples, [&] { return lloyd(generator_flag(a.metric), samples, a.rate, a.seed, o); });
  write_json(a.out, io::to_json(report));
  return kOk;
}

struct ExperimentArgs {
  std::string spec_file;
  std::optional<std::uint64_t> data_seed;
  std::vector<std::string> methods = {"all"};
  std::vector<std::string> metrics = {"all"};
  std::size_t k = 4;
  std::string seeds = "1-10";
  std::string out_dir = "experiment";
  std::string linkage = "ward";
  bool no_consolidate = false;
  bool standardize = false;
  std::size_t restarts = 1;
  bool plots = false;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  SyntheticSpec spec = a.spec_file.empty() ? default_synthetic_spec() : io::read_spec_file(a.spec_file);
  if (a.data_seed) spec.seed = *a.data_seed;
  const auto methods = expand_methods(a.methods);
  const auto metrics = expand_metrics(a.metrics);
  const auto seeds = parse_seeds(a.seeds);
  ExperimentOptions opts;
  opts.linkage = parse_linkage(a.linkage);
  opts.consolidate = !a.no_consolidate;
  opts.standardize = a.standardize;
  opts.restarts = a.restarts;

  const PointSet data = generate_dataset(spec);
  const auto reports = run_experiment(spec, methods, metrics, a.k, seeds, opts);

  const fs::path dir(a.out_dir);
  fs::create_directories(dir / "runs");
  {
    Output csv((dir / "data.csv").string());
    io::write_points_csv(csv.stream(), data);
  }
  write_json((dir / "spec.json").string(), io::to_json(spec));
  {
    Output csv((dir / "reports.csv").string());
    io::write_reports_csv(csv.stream(), reports);
  }
  for (const auto& r : reports) {
    const std::string name = std::string(to_string(r.method)) + "_" + r.generator + "_seed" +
                             std::to_string(r.seed) + ".json";
    write_json((dir / "runs" / name).string(), io::to_json(r));
  }
  std::ostringstream summary;
  io::write_summary(summary, reports, data);
  {
    Output txt((dir / "summary.txt").string());
    txt.stream() << summary.str();
  }
  std::cout << summary.str();

  if (a.plots && data.dim() == 2) {
    fs::create_directories(dir / "plots");
    std::vector<std::size_t> truth(data.labels().begin(), data.labels().end());
    PointSet means(2);
    for (const auto& c : spec.clusters) means.push_back(c.mean);
    {
      Output svg((dir / "plots" / "original.svg").string());
      io::write_scatter_svg(svg.stream(), data, truth, means, "original data");
    }
    // One panel per (method, metric) from the first seed.
    for (const auto& r : reports) {
      if (r.seed != seeds.front()) continue;
      const std::string name = std::string(to_string(r.method)) + "_" + r.generator + ".svg";
      Output svg((dir / "plots" / name).string());
      io::write_scatter_svg(svg.stream(), data, r.result.assignments, r.result.centers,
                            std::string(to_string(r.method)) + ", " +
                                io::embedding_label(r.generator));
    }
  }
  return kOk;
}

struct QueryArgs {
  std::string metric = "euclidean";
  std::string x, y;
  std::size_t steps = 10;
  std::string in;
  std::string center;
  double radius = 1.0;
  std::size_t samples = 64;
  std::string out = "-";
};

int run_distance(const QueryArgs& a) {
  const Generator g = generator_flag(a.metric);
  const auto x = parse_vector(a.x, "--x");
  const auto y = parse_vector(a.y, "--y");
  if (x.size() != y.size()) throw UsageError("--x and --y must have the same length");
  json j = {{"generator", g.name},
            {"distance", distance(g, x, y)},
            {"bregman_left", bregman_divergence(g, x, y)},
            {"bregman_right", bregman_divergence(g, y, x)}};
  if (g.conjugate_pieces) j["dual_distance"] = dual_distance(g, x, y);
  write_json(a.out, j);
  return kOk;
}

int run_geodesic(const QueryArgs& a) {
  const Generator g = generator_flag(a.metric);
  const auto x = parse_vector(a.x, "--x");
  const auto y = parse_vector(a.y, "--y");
  if (x.size() != y.size()) throw UsageError("--x and --y must have the same length");
  if (a.steps < 1) throw UsageError("--steps must be at least 1");
  Output out(a.out);
  auto& os = out.stream();
  os.precision(17);
  os << "t";
  for (std::size_t j = 0; j < x.size(); ++j) os << ",x" << j + 1;
  os << "\n";
  for (std::size_t i = 0; i <= a.steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(a.steps);
    const Point p = geodesic_point(g, x, y, t);
    os << t;
    for (double v : p) os << "," << v;
    os << "\n";
  }
  return kOk;
}

int run_centroid(const QueryArgs& a) {
  const Generator g = generator_flag(a.metric);
  const PointSet pts = io::read_points_csv_file(a.in);
  const auto j = with_csv_rows(a.in, pts, [&] {
    const Point c = centroid(g, pts);
    double cost = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) cost += squared_distance(g, pts[i], c);
    return json{{"generator", g.name}, {"centroid", c}, {"sum_squared_distance", cost}};
  });
  write_json(a.out, j);
  return kOk;
}

int run_ball(const QueryArgs& a) {
  const Generator g = generator_flag(a.metric);
  const Ball b{parse_vector(a.center, "--center"), a.radius};
  const auto poly = ball_boundary_polyline(g, b, a.samples);
  Output out(a.out);
  auto& os = out.stream();
  os.precision(17);
  os << "x1,x2\n";
  for (const auto& p : poly) os << p[0] << "," << p[1] << "\n";
  return kOk;
}

void apply_thread_env() {
  const char* env = std::getenv("RB_THREADS");
  if (!env || !*env) return;
  int n = 0;
  const std::string s(env);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || p != s.data() + s.size() || n < 0)
    throw UsageError("RB_THREADS must be a nonnegative integer, got '" + s + "'");
  kernels::set_thread_limit(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemann-Bregman geometry: distances, Voronoi diagrams, quantization and clustering"};
  app.require_subcommand(1);
  auto metric_check = CLI::Validator(
      [](std::string& s) -> std::string {
        const std::string name = canonical_generator_name(s);
        const auto known = builtin_generator_names();
        if (std::find(known.begin(), known.end(), name) == known.end())
          return "unknown metric '" + s + "' (euclidean, exp, negexp, shannon, burg)";
        s = name;
        return {};
      },
      "METRIC");

  GenDataArgs gen;
  auto* cmd_gen = app.add_subcommand("gen-data", "Sample the labelled synthetic dataset as CSV");
  cmd_gen->add_option("--spec", gen.spec_file, "JSON spec {seed, clusters:[{mean,sigma,count}]}")
      ->check(CLI::ExistingFile);
  cmd_gen->add_option("--seed", gen.seed, "Overrides the spec seed");
  cmd_gen->add_option("--out,-o", gen.out, "Output CSV ('-' for stdout)");

  ClusterArgs cl;
  auto* cmd_cluster = app.add_subcommand("cluster", "Cluster a CSV point set");
  cmd_cluster->add_option("--in,-i", cl.in, "Input CSV")->required()->check(CLI::ExistingFile);
  cmd_cluster->add_option("--method", cl.method)
      ->check(CLI::IsMember({"kmeans", "em", "hcpc", "hac"}));
  cmd_cluster->add_option("--metric", cl.metric)->check(metric_check);
  cmd_cluster->add_option("--k", cl.k)->check(kAtLeastOne);
  cmd_cluster->add_option("--seed", cl.seed);
  cmd_cluster->add_option("--linkage", cl.linkage, "hac only (default ward)")
      ->check(CLI::IsMember({"single", "average", "complete", "ward"}));
  cmd_cluster->add_flag("--no-consolidate", cl.no_consolidate, "hcpc: skip k-means consolidation");
  cmd_cluster->add_option("--components", cl.components, "hcpc: principal axes kept")
      ->check(kAtLeastOne);
  cmd_cluster->add_flag("--standardize", cl.standardize, "z-score embedded coordinates");
  cmd_cluster->add_option("--restarts", cl.restarts, "kmeans: k-means++ starts, best kept")
      ->check(kAtLeastOne);
  cmd_cluster->add_option("--out,-o", cl.out, "Output prefix for .json and .csv (stdout JSON if unset)");
  cmd_cluster->add_option("--plot", cl.plot, "SVG scatter plot of the result");

  VoronoiArgs vo;
  auto* cmd_vor = app.add_subcommand("voronoi", "Render a Voronoi diagram as PGM or SVG");
  cmd_vor->add_option("--sites-file,--sites", vo.sites_file, "CSV of 2-D sites")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_vor->add_option("--metric", vo.metric)->check(metric_check);
  cmd_vor->add_option("--flavor", vo.flavor)
      ->check(CLI::IsMember({"left", "right", "symmetrized", "riemann"}));
  cmd_vor->add_option("--bbox", vo.bbox, "x_lo,x_hi,y_lo,y_hi (default: padded site extent)");
  cmd_vor->add_option("--size", vo.size, "N or WxH pixels");
  cmd_vor->add_option("--out,-o", vo.out, "Output file (.pgm or .svg)")->required();
  cmd_vor->add_option("--format", vo.format)->check(CLI::IsMember({"pgm", "svg"}));
  cmd_vor->add_flag("--exact", vo.exact, "Exact riemann cells with pulled-back curved edges");
  cmd_vor->add_flag("--mark-sites", vo.mark_sites, "Draw site markers (svg raster)");

  QuantizeArgs qu;
  auto* cmd_q = app.add_subcommand("quantize", "Design a fixed-rate codebook with Lloyd's algorithm");
  cmd_q->add_option("--in,-i", qu.in)->required()->check(CLI::ExistingFile);
  cmd_q->add_option("--metric", qu.metric)->check(metric_check);
  cmd_q->add_option("--rate", qu.rate, "Codebook size")->required()->check(kAtLeastOne);
  cmd_q->add_option("--seed", qu.seed);
  cmd_q->add_option("--max-iters", qu.max_iters)->check(kAtLeastOne);
  cmd_q->add_option("--tol", qu.tol)->check(CLI::NonNegativeNumber);
  cmd_q->add_option("--out,-o", qu.out, "Output JSON ('-' for stdout)");

  ExperimentArgs ex;
  auto* cmd_ex = app.add_subcommand("experiment", "Method x metric x seed grid on the synthetic data");
  cmd_ex->add_option("--spec", ex.spec_file)->check(CLI::ExistingFile);
  cmd_ex->add_option("--data-seed", ex.data_seed, "Overrides the spec seed");
  cmd_ex->add_option("--methods", ex.methods, "kmeans,em,hcpc,hac or all")
      ->delimiter(',')
      ->check(CLI::IsMember({"kmeans", "em", "hcpc", "hac", "all"}));
  cmd_ex->add_option("--metrics", ex.metrics, "Comma-separated metrics or all")
      ->delimiter(',')
      ->check(CLI::Validator(
          [&](std::string& s) -> std::string {
            if (s == "all") return {};
            std::string t = s;
            return metric_check(t);
          },
          "METRIC|all"));
  cmd_ex->add_option("--k", ex.k)->check(kAtLeastOne);
  cmd_ex->add_option("--seeds", ex.seeds, "e.g. 1-10 or 1,4,9");
  cmd_ex->add_option("--out-dir", ex.out_dir);
  cmd_ex->add_option("--linkage", ex.linkage, "hac linkage")
      ->check(CLI::IsMember({"single", "average", "complete", "ward"}));
  cmd_ex->add_flag("--no-consolidate", ex.no_consolidate);
  cmd_ex->add_flag("--standardize", ex.standardize);
  cmd_ex->add_option("--restarts", ex.restarts, "kmeans starts per seed")->check(kAtLeastOne);
  cmd_ex->add_flag("--plots", ex.plots, "Write SVG scatter plots");

  QueryArgs q;
  auto* cmd_dist = app.add_subcommand("distance", "Distance and divergences between two points");
  auto* cmd_geo = app.add_subcommand("geodesic", "Sample the geodesic between two points as CSV");
  for (auto* c : {cmd_dist, cmd_geo}) {
    c->add_option("--metric", q.metric)->check(metric_check);
    c->add_option("--x", q.x, "Comma-separated coordinates")->required();
    c->add_option("--y", q.y, "Comma-separated coordinates")->required();
    c->add_option("--out,-o", q.out);
  }
  cmd_geo->add_option("--steps", q.steps, "Number of segments")->check(kAtLeastOne);
  auto* cmd_cen = app.add_subcommand("centroid", "Centroid of a CSV point set");
  cmd_cen->add_option("--metric", q.metric)->check(metric_check);
  cmd_cen->add_option("--in,-i", q.in)->required()->check(CLI::ExistingFile);
  cmd_cen->add_option("--out,-o", q.out);
  auto* cmd_ball = app.add_subcommand("ball", "Boundary of a 2-D ball as CSV");
  cmd_ball->add_option("--metric", q.metric)->check(metric_check);
  cmd_ball->add_option("--center", q.center)->required();
  cmd_ball->add_option("--radius", q.radius)->check(CLI::PositiveNumber);
  cmd_ball->add_option("--samples", q.samples)->check(CLI::Range(3, 100000));
  cmd_ball->add_option("--out,-o", q.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    apply_thread_env();
    if (*cmd_gen) return run_gen_data(gen);
    if (*cmd_cluster) return run_cluster(cl);
    if (*cmd_vor) return run_voronoi(vo);
    if (*cmd_q) return run_quantize(qu);
    if (*cmd_ex) return run_experiment_cmd(ex);
    if (*cmd_dist) return run_distance(q);
    if (*cmd_geo) return run_geodesic(q);
    if (*cmd_cen) return run_centroid(q);
    if (*cmd_ball) return run_ball(q);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
