#pragma once

#include <span>
#include <vector>

#include "rbgeo/generator.hpp"
#include "rbgeo/point_set.hpp"

namespace rbgeo {

// Riemann-Bregman distance d_phi(x, y) = || h(x) - h(y) ||. The squared form is
// what the clustering and quantization loops use.
double squared_distance(const Generator& g, std::span<const double> x,
                        std::span<const double> y);
double distance(const Generator& g, std::span<const double> x,
                std::span<const double> y);

// Separable Bregman divergence sum_j delta_phi(x_j, y_j). Not symmetric.
double bregman_divergence(const Generator& g, std::span<const double> x,
                          std::span<const double> y);

struct GeodesicSample {
  double t = 0.0;
  Point point;
};

// Samples gamma(t) = H((1-t) h(x) + t h(y)) at each t in ts. Every t must lie
// in [0, 1]; the embedded segment is not extended beyond its endpoints.
std::vector<GeodesicSample> geodesic(const Generator& g, std::span<const double> x,
                                     std::span<const double> y,
                                     std::span<const double> ts);
Point geodesic_point(const Generator& g, std::span<const double> x,
                     std::span<const double> y, double t);

// Weighted arithmetic mean of h(points); weights may be empty (uniform).
Point embedded_mean(const Generator& g, const PointSet& points,
                    std::span<const double> weights = {});

// Minimiser of sum_n w_n d_phi(x_n, xi)^2, i.e. H(embedded_mean(points)).
// Weights are normalised internally.
Point centroid(const Generator& g, const PointSet& points,
               std::span<const double> weights = {});

// d_{phi*}(phi'(x), phi'(y)) computed through the conjugate embedding h*.
double dual_distance(const Generator& g, std::span<const double> x,
                     std::span<const double> y);

struct Ball {
  Point center;
  double radius = 0.0;
};

bool ball_contains(const Generator& g, const Ball& ball, std::span<const double> y);

// n_samples points of the preimage under h of the Euclidean circle of radius r
// around h(center), at uniform angles starting from 0. K = 2 only; throws
// DomainError when the circle leaves the embedded range.
std::vector<Point> ball_boundary_polyline(const Generator& g, const Ball& ball,
                                          std::size_t n_samples);

// Whole point sets through h / H.
PointSet embed_points(const Generator& g, const PointSet& points);
PointSet unembed_points(const Generator& g, const PointSet& points);

}  // namespace rbgeo
