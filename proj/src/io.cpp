#include "rbgeo/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace rbgeo::io {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line, const std::string& column) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw FormatError("line " + std::to_string(line) + ", column '" + column +
                      "': not a number: '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, std::size_t line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError("line " + std::to_string(line) + ", column 'label': not an integer: '" +
                      s + "'");
  }
  return v;
}

// Shortest representation that round-trips.
std::string fmt(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

const std::array<std::string, 16> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173", "#3182bd"};

struct Viewport {
  double x_lo, x_hi, y_lo, y_hi;
  double width, height;
  double px(double x) const { return (x - x_lo) / (x_hi - x_lo) * width; }
  double py(double y) const { return (y_hi - y) / (y_hi - y_lo) * height; }
};

json vector_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

}  // namespace

PointSet read_points_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw FormatError("CSV input is empty (expected a header row)");
  int label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") {
      if (label_col >= 0) throw FormatError("CSV header has two 'label' columns");
      label_col = static_cast<int>(c);
    }
  }
  const std::size_t dim = header.size() - (label_col >= 0 ? 1 : 0);
  if (dim == 0) throw FormatError("CSV header has no coordinate columns");
  std::vector<double> coords;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<int>(c) == label_col) {
        labels.push_back(parse_int(fields[c], line_no));
      } else {
        coords.push_back(parse_double(fields[c], line_no, header[c]));
      }
    }
  }
  if (coords.empty()) throw FormatError("CSV input has no data rows");
  return PointSet(dim, std::move(coords), std::move(labels));
}

PointSet read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  for (std::size_t j = 0; j < points.dim(); ++j) out << (j ? "," : "") << "x" << j + 1;
  if (points.has_labels()) out << ",label";
  out << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points[i];
    for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << fmt(p[j]);
    if (points.has_labels()) out << "," << points.labels()[i];
    out << "\n";
  }
}

void write_assignments_csv(std::ostream& out, const PointSet& points,
                           const ClusteringResult& result) {
  for (std::size_t j = 0; j < points.dim(); ++j) out << "x" << j + 1 << ",";
  out << "assignment";
  if (points.has_labels()) out << ",label";
  out << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points[i];
    for (double v : p) out << fmt(v) << ",";
    out << result.assignments[i];
    if (points.has_labels()) out << "," << points.labels()[i];
    out << "\n";
  }
}

SyntheticSpec parse_spec(const json& j) {
  if (!j.is_object()) throw FormatError("spec: expected a JSON object");
  SyntheticSpec s;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw FormatError("spec.seed: expected a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (!j.contains("clusters") || !j["clusters"].is_array()) {
    throw FormatError("spec.clusters: expected an array");
  }
  const auto& arr = j["clusters"];
  for (std::size_t c = 0; c < arr.size(); ++c) {
    const std::string where = "spec.clusters[" + std::to_string(c) + "]";
    const auto& cj = arr[c];
    if (!cj.is_object()) throw FormatError(where + ": expected an object");
    ClusterSpec cl;
    for (const char* key : {"mean", "sigma"}) {
      if (!cj.contains(key) || !cj[key].is_array()) {
        throw FormatError(where + "." + key + ": expected an array of numbers");
      }
      std::vector<double> v;
      for (const auto& x : cj[key]) {
        if (!x.is_number()) throw FormatError(where + "." + key + ": expected numbers");
        v.push_back(x.get<double>());
      }
      (std::string(key) == "mean" ? cl.mean : cl.sigma) = std::move(v);
    }
    if (!cj.contains("count") || !cj["count"].is_number_unsigned()) {
      throw FormatError(where + ".count: expected a positive integer");
    }
    cl.count = cj["count"].get<std::size_t>();
    s.clusters.push_back(std::move(cl));
  }
  try {
    validate(s);
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  return s;
}

SyntheticSpec read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("spec file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_spec(j);
}

json to_json(const SyntheticSpec& spec) {
  json clusters = json::array();
  for (const auto& c : spec.clusters)
    clusters.push_back({{"mean", c.mean}, {"sigma", c.sigma}, {"count", c.count}});
  return {{"seed", spec.seed}, {"clusters", clusters}};
}

json to_json(const PointSet& points) {
  json rows = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) rows.push_back(vector_json(points[i]));
  return rows;
}

json to_json(const ClusteringResult& r) {
  return {{"method", std::string(to_string(r.method))},
          {"generator", r.generator},
          {"k", r.k},
          {"seed", r.seed},
          {"iterations", r.iterations},
          {"objective", r.objective},
          {"sizes", r.sizes},
          {"centers", to_json(r.centers)},
          {"assignments", r.assignments}};
}

json to_json(const GaussianMixtureModel& m) {
  json comps = json::array();
  for (const auto& c : m.components)
    comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"covariance", c.covariance}});
  return {{"components", comps},
          {"ridge", m.ridge},
          {"converged", m.converged},
          {"log_likelihood", m.log_likelihood}};
}

json to_json(const QuantizerReport& r) {
  return {{"generator", r.codebook.generator().name},
          {"rate", r.codebook.rate()},
          {"codes", to_json(r.codebook.codes())},
          {"assignments", r.assignments},
          {"distortion", r.distortion},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"repaired_cells", r.repaired_cells},
          {"distortion_trace", r.distortion_trace}};
}

json to_json(const EvaluationReport& r) {
  return {{"method", std::string(to_string(r.method))},
          {"generator", r.generator},
          {"seed", r.seed},
          {"accuracy", r.accuracy},
          {"adjusted_rand_index", r.adjusted_rand_index},
          {"normalized_mutual_information", r.normalized_mutual_information},
          {"matched_sizes", r.sizes},
          {"matched_centers", to_json(r.centers)},
          {"result", to_json(r.result)}};
}

void write_pgm(std::ostream& out, const VoronoiRaster& raster) {
  std::uint32_t peak = 0;
  for (auto l : raster.labels) peak = std::max(peak, l);
  if (peak > 255) throw InvalidArgument("PGM output supports at most 256 sites");
  out << "P5\n" << raster.width << " " << raster.height << "\n255\n";
  std::vector<char> bytes(raster.labels.size());
  for (std::size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = static_cast<char>(static_cast<unsigned char>(raster.labels[i]));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

const std::string& palette_color(std::size_t index) { return kPalette[index % kPalette.size()]; }

void write_raster_svg(std::ostream& out, const VoronoiRaster& r, const PointSet* sites) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << r.width
      << "\" height=\"" << r.height << "\" viewBox=\"0 0 " << r.width << " " << r.height
      << "\" shape-rendering=\"crispEdges\">\n";
  for (std::size_t row = 0; row < r.height; ++row) {
    std::size_t start = 0;
    for (std::size_t col = 1; col <= r.width; ++col) {
      if (col < r.width && r.at(col, row) == r.at(start, row)) continue;
      out << "<rect x=\"" << start << "\" y=\"" << row << "\" width=\"" << col - start
          << "\" height=\"1\" fill=\"" << palette_color(r.at(start, row)) << "\"/>\n";
      start = col;
    }
  }
  if (sites) {
    const Viewport vp{r.bbox.x_lo, r.bbox.x_hi, r.bbox.y_lo, r.bbox.y_hi,
                      static_cast<double>(r.width), static_cast<double>(r.height)};
    for (std::size_t i = 0; i < sites->size(); ++i) {
      const auto s = (*sites)[i];
      out << "<circle cx=\"" << fixed(vp.px(s[0]), 2) << "\" cy=\"" << fixed(vp.py(s[1]), 2)
          << "\" r=\"3\" fill=\"black\" stroke=\"white\"/>\n";
    }
  }
  out << "</svg>\n";
}

void write_cells_svg(std::ostream& out, const std::vector<ExactCell>& cells,
                     const SiteSet& sites, const BoundingBox& bbox, std::size_t size_px) {
  const double w = static_cast<double>(size_px);
  const Viewport vp{bbox.x_lo, bbox.x_hi, bbox.y_lo, bbox.y_hi, w, w};
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size_px
      << "\" height=\"" << size_px << "\" viewBox=\"0 0 " << size_px << " " << size_px
      << "\">\n";
  for (const auto& cell : cells) {
    if (cell.edges.empty()) continue;
    out << "<path fill=\"" << palette_color(cell.site) << "\" fill-opacity=\"0.45\" d=\"";
    bool first = true;
    for (const auto& e : cell.edges) {
      for (const auto& p : e.preimage) {
        out << (first ? "M" : "L") << fixed(vp.px(p[0]), 2) << "," << fixed(vp.py(p[1]), 2)
            << " ";
        first = false;
      }
    }
    out << "Z\"/>\n";
    for (const auto& e : cell.edges) {
      if (e.neighbor < 0) continue;
      out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
      for (const auto& p : e.preimage)
        out << fixed(vp.px(p[0]), 2) << "," << fixed(vp.py(p[1]), 2) << " ";
      out << "\"/>\n";
    }
  }
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto s = sites.sites()[i];
    out << "<circle cx=\"" << fixed(vp.px(s[0]), 2) << "\" cy=\"" << fixed(vp.py(s[1]), 2)
        << "\" r=\"3\" fill=\"black\"/>\n";
  }
  out << "</svg>\n";
}

void write_scatter_svg(std::ostream& out, const PointSet& points,
                       std::span<const std::size_t> assignments, const PointSet& centers,
                       const std::string& title, std::size_t size_px) {
  if (points.dim() != 2) throw InvalidArgument("scatter plots need 2-D points");
  double x_lo = kInf, x_hi = -kInf, y_lo = kInf, y_hi = -kInf;
  for (std::size_t i = 0; i < points.size(); ++i) {
    x_lo = std::min(x_lo, points[i][0]);
    x_hi = std::max(x_hi, points[i][0]);
    y_lo = std::min(y_lo, points[i][1]);
    y_hi = std::max(y_hi, points[i][1]);
  }
  const double pad_x = 0.05 * std::max(x_hi - x_lo, 1e-9);
  const double pad_y = 0.05 * std::max(y_hi - y_lo, 1e-9);
  const double w = static_cast<double>(size_px);
  const Viewport vp{x_lo - pad_x, x_hi + pad_x, y_lo - pad_y, y_hi + pad_y, w, w};
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size_px
      << "\" height=\"" << size_px + 24 << "\" viewBox=\"0 -24 " << size_px << " "
      << size_px + 24 << "\">\n"
      << "<text x=\"4\" y=\"-6\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << size_px << "\" height=\"" << size_px
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << "<circle cx=\"" << fixed(vp.px(points[i][0]), 2) << "\" cy=\""
        << fixed(vp.py(points[i][1]), 2) << "\" r=\"2\" fill=\""
        << palette_color(assignments.empty() ? 0 : assignments[i]) << "\"/>\n";
  }
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double cx = vp.px(centers[c][0]);
    const double cy = vp.py(centers[c][1]);
    out << "<path d=\"M" << fixed(cx - 6, 2) << "," << fixed(cy, 2) << " H" << fixed(cx + 6, 2)
        << " M" << fixed(cx, 2) << "," << fixed(cy - 6, 2) << " V" << fixed(cy + 6, 2)
        << "\" stroke=\"black\" stroke-width=\"2.5\"/>\n";
  }
  out << "</svg>\n";
}

void write_reports_csv(std::ostream& out, const std::vector<EvaluationReport>& reports) {
  if (reports.empty()) return;
  const std::size_t k = reports.front().sizes.size();
  const std::size_t dim = reports.front().centers.dim();
  out << "method,generator,seed,accuracy,ari,nmi";
  for (std::size_t c = 0; c < k; ++c) out << ",size_" << c + 1;
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < dim; ++j) out << ",center_" << c + 1 << "_x" << j + 1;
  out << "\n";
  for (const auto& r : reports) {
    out << to_string(r.method) << "," << r.generator << "," << r.seed << "," << fmt(r.accuracy)
        << "," << fmt(r.adjusted_rand_index) << "," << fmt(r.normalized_mutual_information);
    for (auto s : r.sizes) out << "," << s;
    for (std::size_t c = 0; c < r.centers.size(); ++c)
      for (double v : r.centers[c]) out << "," << fmt(v);
    out << "\n";
  }
}

std::string embedding_label(const std::string& generator) {
  if (generator == "euclidean") return "h(x) = x";
  if (generator == "exp") return "h(x) = 2exp(x/2)";
  if (generator == "negexp") return "h(x) = -2exp(-x/2)";
  if (generator == "shannon") return "h(x) = 2sqrt(x)";
  if (generator == "burg") return "h(x) = ln(x)";
  return generator;
}

void write_summary(std::ostream& out, const std::vector<EvaluationReport>& reports,
                   const PointSet& data) {
  if (reports.empty()) return;
  const std::size_t k = reports.front().sizes.size();
  // Groundtruth sizes and empirical means.
  std::vector<std::size_t> true_sizes(k, 0);
  std::vector<double> true_means(k * data.dim(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto l = static_cast<std::size_t>(data.labels()[i]);
    if (l >= k) continue;
    ++true_sizes[l];
    for (std::size_t j = 0; j < data.dim(); ++j) true_means[l * data.dim() + j] += data[i][j];
  }
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t j = 0; j < data.dim(); ++j)
      if (true_sizes[l]) true_means[l * data.dim() + j] /= static_cast<double>(true_sizes[l]);

  auto center_text = [](std::span<const double> c) {
    std::string s = "(";
    for (std::size_t j = 0; j < c.size(); ++j) s += (j ? ", " : "") + fixed(c[j], 2);
    return s + ")";
  };

  // Reports grouped by method then generator, preserving first-seen order.
  std::vector<std::string> methods;
  std::map<std::string, std::vector<std::string>> gens;
  std::map<std::pair<std::string, std::string>, std::vector<const EvaluationReport*>> groups;
  for (const auto& r : reports) {
    const std::string m(to_string(r.method));
    if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
    auto& g = gens[m];
    if (std::find(g.begin(), g.end(), r.generator) == g.end()) g.push_back(r.generator);
    groups[{m, r.generator}].push_back(&r);
  }

  for (const auto& m : methods) {
    out << "== " << m << ": cluster sizes and accuracy (sizes from the first seed, "
        << "scores averaged over seeds) ==\n";
    out << std::left << std::setw(22) << "Cluster";
    for (std::size_t c = 0; c < k; ++c) out << std::right << std::setw(7) << c + 1;
    out << std::setw(11) << "Accuracy" << std::setw(9) << "ARI" << std::setw(9) << "NMI"
        << std::setw(7) << "runs" << "\n";
    out << std::left << std::setw(22) << "original";
    for (auto s : true_sizes) out << std::right << std::setw(7) << s;
    out << std::setw(11) << "1" << "\n";
    for (const auto& g : gens[m]) {
      const auto& rs = groups[{m, g}];
      double acc = 0.0, ari = 0.0, nmi = 0.0;
      for (const auto* r : rs) {
        acc += r->accuracy;
        ari += r->adjusted_rand_index;
        nmi += r->normalized_mutual_information;
      }
      const auto n = static_cast<double>(rs.size());
      out << std::left << std::setw(22) << embedding_label(g);
      for (auto s : rs.front()->sizes) out << std::right << std::setw(7) << s;
      out << std::setw(11) << fixed(acc / n, 3) << std::setw(9) << fixed(ari / n, 3)
          << std::setw(9) << fixed(nmi / n, 3) << std::setw(7) << rs.size() << "\n";
    }
    out << "\n== " << m << ": cluster centers (first seed) ==\n";
    out << std::left << std::setw(22) << "Cluster";
    for (std::size_t c = 0; c < k; ++c) out << std::setw(18) << c + 1;
    out << "\n" << std::setw(22) << "original";
    for (std::size_t c = 0; c < k; ++c)
      out << std::setw(18)
          << center_text(std::span<const double>(true_means).subspan(c * data.dim(), data.dim()));
    out << "\n";
    for (const auto& g : gens[m]) {
      const auto* r = groups[{m, g}].front();
      out << std::setw(22) << embedding_label(g);
      for (std::size_t c = 0; c < r->centers.size(); ++c) out << std::setw(18) << center_text(r->centers[c]);
      out << "\n";
    }
    out << std::right << "\n";
  }
}

}  // namespace rbgeo::io
