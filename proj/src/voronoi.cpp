#include "rbgeo/voronoi.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rbgeo/errors.hpp"
#include "rbgeo/geometry.hpp"
#include "rbgeo/kernels.hpp"

namespace rbgeo {
namespace {

using Vec2 = std::array<double, 2>;

void check_box(const Generator& g, const BoundingBox& b) {
  if (!(b.x_lo < b.x_hi) || !(b.y_lo < b.y_hi)) {
    throw InvalidArgument("bounding box must satisfy x_lo < x_hi and y_lo < y_hi");
  }
  const Interval& d = g.domain;
  if (b.x_lo < d.lower || b.x_hi > d.upper) {
    throw DomainError("bounding box x-range leaves the domain of '" + g.name + "'", 0);
  }
  if (b.y_lo < d.lower || b.y_hi > d.upper) {
    throw DomainError("bounding box y-range leaves the domain of '" + g.name + "'", 1);
  }
}

// Embedded point first, then site-by-site; the Riemann branch evaluates
// exactly sum (h(x_j) - h(y_ij))^2 so it agrees bit-for-bit with a Euclidean
// argmin over pre-embedded data.
std::size_t classify_unchecked(std::span<const double> point, std::span<const double> hx,
                               const SiteSet& sites, Flavor flavor) {
  const Generator& g = sites.generator();
  const std::size_t dim = sites.dim();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    double v = 0.0;
    if (flavor == Flavor::riemann) {
      const auto s = sites.embedded()[i];
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = hx[j] - s[j];
        v += d * d;
      }
    } else {
      const auto y = sites.sites()[i];
      for (std::size_t j = 0; j < dim; ++j) {
        switch (flavor) {
          case Flavor::left: v += g.scalar_divergence(point[j], y[j]); break;
          case Flavor::right: v += g.scalar_divergence(y[j], point[j]); break;
          default:
            v += 0.5 * (g.scalar_divergence(point[j], y[j]) +
                        g.scalar_divergence(y[j], point[j]));
            break;
        }
      }
    }
    if (v < best) {
      best = v;
      best_idx = i;
    }
  }
  return best_idx;
}

struct LabelledVertex {
  Vec2 p;
  int edge_label;  // label of the edge leaving this vertex
};

// Keeps the part of the polygon where a.u <= b. New edges along the line get
// `line_label`.
std::vector<LabelledVertex> clip(const std::vector<LabelledVertex>& poly, const Vec2& a,
                                 double b, int line_label) {
  std::vector<LabelledVertex> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  auto f = [&](const Vec2& u) { return a[0] * u[0] + a[1] * u[1] - b; };
  for (std::size_t i = 0; i < n; ++i) {
    const LabelledVertex& P = poly[i];
    const LabelledVertex& Q = poly[(i + 1) % n];
    const double fp = f(P.p);
    const double fq = f(Q.p);
    const bool p_in = fp <= 0.0;
    const bool q_in = fq <= 0.0;
    auto intersection = [&]() {
      const double t = fp / (fp - fq);
      return Vec2{P.p[0] + t * (Q.p[0] - P.p[0]), P.p[1] + t * (Q.p[1] - P.p[1])};
    };
    if (p_in) {
      out.push_back(P);
      if (!q_in) out.push_back({intersection(), line_label});
    } else if (q_in) {
      out.push_back({intersection(), P.edge_label});
    }
  }
  // Drop zero-length edges produced by vertices lying on the line.
  std::vector<LabelledVertex> cleaned;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec2& cur = out[i].p;
    const Vec2& nxt = out[(i + 1) % out.size()].p;
    if (out.size() > 1 && cur == nxt) continue;
    cleaned.push_back(out[i]);
  }
  if (cleaned.size() < 3) cleaned.clear();
  return cleaned;
}

}  // namespace

std::string_view to_string(Flavor f) {
  switch (f) {
    case Flavor::left: return "left";
    case Flavor::right: return "right";
    case Flavor::symmetrized: return "symmetrized";
    case Flavor::riemann: return "riemann";
  }
  return "riemann";
}

Flavor parse_flavor(std::string_view name) {
  for (Flavor f : kAllFlavors)
    if (to_string(f) == name) return f;
  throw InvalidArgument("unknown Voronoi flavor '" + std::string(name) +
                        "' (expected left|right|symmetrized|riemann)");
}

SiteSet::SiteSet(Generator generator, PointSet sites)
    : generator_(std::move(generator)), sites_(std::move(sites)) {
  if (sites_.empty()) throw InvalidArgument("a Voronoi diagram needs at least one site");
  if (count_distinct_rows(sites_) != sites_.size()) {
    throw InvalidArgument("Voronoi sites must be pairwise distinct");
  }
  embedded_ = embed_points(generator_, sites_);
}

double dissimilarity(const Generator& g, Flavor flavor, std::span<const double> x,
                     std::span<const double> site) {
  switch (flavor) {
    case Flavor::left: return bregman_divergence(g, x, site);
    case Flavor::right: return bregman_divergence(g, site, x);
    case Flavor::symmetrized:
      return 0.5 * (bregman_divergence(g, x, site) + bregman_divergence(g, site, x));
    case Flavor::riemann: return squared_distance(g, x, site);
  }
  return 0.0;
}

std::size_t classify(std::span<const double> point, const SiteSet& sites, Flavor flavor) {
  if (point.size() != sites.dim()) throw InvalidArgument("point dimension mismatch");
  const Point hx = embed(sites.generator(), point);
  return classify_unchecked(point, hx, sites, flavor);
}

std::array<double, 2> VoronoiRaster::pixel_center(std::size_t col, std::size_t row) const {
  const double dx = (bbox.x_hi - bbox.x_lo) / static_cast<double>(width);
  const double dy = (bbox.y_hi - bbox.y_lo) / static_cast<double>(height);
  return {bbox.x_lo + (static_cast<double>(col) + 0.5) * dx,
          bbox.y_hi - (static_cast<double>(row) + 0.5) * dy};
}

bool VoronoiRaster::pixel_of(std::span<const double> p, std::size_t& col,
                             std::size_t& row) const {
  if (p[0] < bbox.x_lo || p[0] > bbox.x_hi || p[1] < bbox.y_lo || p[1] > bbox.y_hi)
    return false;
  const double fx = (p[0] - bbox.x_lo) / (bbox.x_hi - bbox.x_lo) * static_cast<double>(width);
  const double fy = (bbox.y_hi - p[1]) / (bbox.y_hi - bbox.y_lo) * static_cast<double>(height);
  col = std::min(width - 1, static_cast<std::size_t>(fx));
  row = std::min(height - 1, static_cast<std::size_t>(fy));
  return true;
}

VoronoiRaster rasterize(const SiteSet& sites, Flavor flavor, const BoundingBox& bbox,
                        std::size_t width, std::size_t height, kernels::Execution exec) {
  if (sites.dim() != 2) throw InvalidArgument("rasterization requires 2-D sites");
  if (width == 0 || height == 0) throw InvalidArgument("raster size must be positive");
  check_box(sites.generator(), bbox);
  VoronoiRaster r{bbox, width, height, flavor, std::vector<std::uint32_t>(width * height)};
  const Generator& g = sites.generator();
  auto pixel = [&](std::size_t col, std::size_t row) {
    const auto p = r.pixel_center(col, row);
    const double hx[2] = {g.h(p[0]), g.h(p[1])};
    return static_cast<std::uint32_t>(classify_unchecked(p, hx, sites, flavor));
  };
  if (exec == kernels::Execution::parallel) {
    kernels::parallel::fill_raster(r.labels, width, height, pixel);
  } else {
    kernels::serial::fill_raster(r.labels, width, height, pixel);
  }
  return r;
}

double ExactCell::area() const {
  double a = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = polygon[i];
    const auto& q = polygon[(i + 1) % n];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

BoundingBox embedded_box(const Generator& g, const BoundingBox& bbox) {
  check_box(g, bbox);
  const BoundingBox e{g.h(bbox.x_lo), g.h(bbox.x_hi), g.h(bbox.y_lo), g.h(bbox.y_hi)};
  if (!std::isfinite(e.x_lo) || !std::isfinite(e.x_hi)) {
    throw DomainError("bounding box x-range has no finite image under h", 0);
  }
  if (!std::isfinite(e.y_lo) || !std::isfinite(e.y_hi)) {
    throw DomainError("bounding box y-range has no finite image under h", 1);
  }
  return e;
}

std::vector<ExactCell> exact_riemann_cells(const SiteSet& sites, const BoundingBox& bbox,
                                           std::size_t samples_per_edge) {
  if (sites.dim() != 2) throw InvalidArgument("exact cells require 2-D sites");
  if (samples_per_edge < 2) throw InvalidArgument("need at least 2 samples per edge");
  if (count_distinct_rows(sites.embedded()) != sites.size()) {
    throw InvalidArgument("sites coincide after embedding");
  }
  const Generator& g = sites.generator();
  const BoundingBox eb = embedded_box(g, bbox);
  const PointSet& s = sites.embedded();

  std::vector<ExactCell> cells;
  cells.reserve(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    std::vector<LabelledVertex> poly = {{{eb.x_lo, eb.y_lo}, -1},
                                        {{eb.x_hi, eb.y_lo}, -1},
                                        {{eb.x_hi, eb.y_hi}, -1},
                                        {{eb.x_lo, eb.y_hi}, -1}};
    const auto si = s[i];
    for (std::size_t j = 0; j < sites.size() && !poly.empty(); ++j) {
      if (j == i) continue;
      const auto sj = s[j];
      // |u - si|^2 <= |u - sj|^2  <=>  2 u.(sj - si) <= |sj|^2 - |si|^2
      const Vec2 a{2.0 * (sj[0] - si[0]), 2.0 * (sj[1] - si[1])};
      const double b = (sj[0] * sj[0] + sj[1] * sj[1]) - (si[0] * si[0] + si[1] * si[1]);
      poly = clip(poly, a, b, static_cast<int>(j));
    }
    ExactCell cell;
    cell.site = i;
    const std::size_t n = poly.size();
    for (std::size_t v = 0; v < n; ++v) {
      cell.polygon.push_back(poly[v].p);
      CellEdge e;
      e.from = poly[v].p;
      e.to = poly[(v + 1) % n].p;
      e.neighbor = poly[v].edge_label;
      e.preimage.reserve(samples_per_edge);
      for (std::size_t k = 0; k < samples_per_edge; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(samples_per_edge - 1);
        const double u0 = (1.0 - t) * e.from[0] + t * e.to[0];
        const double u1 = (1.0 - t) * e.from[1] + t * e.to[1];
        e.preimage.push_back({g.h_inverse(u0), g.h_inverse(u1)});
      }
      cell.edges.push_back(std::move(e));
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace rbgeo
