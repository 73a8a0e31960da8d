#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rbgeo/generator.hpp"
#include "rbgeo/kernels.hpp"
#include "rbgeo/point_set.hpp"

namespace rbgeo {

// Which dissimilarity a Voronoi partition minimises:
//   left        delta_Phi(x, y_i)
//   right       delta_Phi(y_i, x)
//   symmetrized (delta_Phi(x, y_i) + delta_Phi(y_i, x)) / 2
//   riemann     d_phi(x, y_i)^2
enum class Flavor { left, right, symmetrized, riemann };

inline constexpr std::array<Flavor, 4> kAllFlavors = {
    Flavor::left, Flavor::right, Flavor::symmetrized, Flavor::riemann};

std::string_view to_string(Flavor f);
Flavor parse_flavor(std::string_view name);

// Sites of a Voronoi diagram under one generator. Sites are validated against
// the domain and must be pairwise distinct; their embeddings are cached.
class SiteSet {
 public:
  SiteSet(Generator generator, PointSet sites);

  const Generator& generator() const noexcept { return generator_; }
  const PointSet& sites() const noexcept { return sites_; }
  const PointSet& embedded() const noexcept { return embedded_; }
  std::size_t size() const noexcept { return sites_.size(); }
  std::size_t dim() const noexcept { return sites_.dim(); }

 private:
  Generator generator_;
  PointSet sites_;
  PointSet embedded_;
};

// Flavor dissimilarity between a point and one site.
double dissimilarity(const Generator& g, Flavor flavor, std::span<const double> x,
                     std::span<const double> site);

// Index of the site minimising the flavor's dissimilarity; lowest index wins
// ties. Works for any dimension.
std::size_t classify(std::span<const double> point, const SiteSet& sites, Flavor flavor);

struct BoundingBox {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;
};

// Row-major label image. Row 0 is the top of the box (y_hi), column 0 its
// left edge (x_lo); labels are sampled at pixel centres.
struct VoronoiRaster {
  BoundingBox bbox;
  std::size_t width = 0;
  std::size_t height = 0;
  Flavor flavor = Flavor::riemann;
  std::vector<std::uint32_t> labels;

  std::uint32_t at(std::size_t col, std::size_t row) const {
    return labels[row * width + col];
  }
  std::array<double, 2> pixel_center(std::size_t col, std::size_t row) const;
  // Pixel containing p, or false when p lies outside the box.
  bool pixel_of(std::span<const double> p, std::size_t& col, std::size_t& row) const;
};

VoronoiRaster rasterize(const SiteSet& sites, Flavor flavor, const BoundingBox& bbox,
                        std::size_t width, std::size_t height,
                        kernels::Execution exec = kernels::Execution::parallel);

// One edge of an exact cell in embedded coordinates. neighbor is the index of
// the site across the edge, or -1 when the edge lies on the clipping box.
struct CellEdge {
  std::array<double, 2> from{};
  std::array<double, 2> to{};
  int neighbor = -1;
  // Samples of the edge pulled back through H (curved in original coordinates).
  std::vector<Point> preimage;
};

struct ExactCell {
  std::size_t site = 0;
  // Convex polygon in embedded coordinates, counter-clockwise. Empty when the
  // cell does not meet the box.
  std::vector<std::array<double, 2>> polygon;
  std::vector<CellEdge> edges;

  double area() const;
};

// Euclidean Voronoi cells of the embedded sites clipped to h(bbox), one per
// site, built by intersecting half-planes. K = 2 only.
std::vector<ExactCell> exact_riemann_cells(const SiteSet& sites, const BoundingBox& bbox,
                                           std::size_t samples_per_edge = 64);

// h(bbox) as a box; throws DomainError when a corner maps to a non-finite value.
BoundingBox embedded_box(const Generator& g, const BoundingBox& bbox);

}  // namespace rbgeo
