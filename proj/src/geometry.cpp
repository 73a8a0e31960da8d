#include "rbgeo/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rbgeo/errors.hpp"

namespace rbgeo {
namespace {

void require_same_dim(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("points have different dimensions");
  }
}

// Rethrows a DomainError raised while processing row `row` with the row named.
[[noreturn]] void rethrow_with_row(const DomainError& e, std::size_t row,
                                   std::size_t dim) {
  std::ostringstream os;
  os << "point " << row << ": " << e.what();
  throw DomainError(os.str(), row * dim + e.index());
}

}  // namespace

double squared_distance(const Generator& g, std::span<const double> x,
                        std::span<const double> y) {
  require_same_dim(x, y);
  check_domain(g, x);
  check_domain(g, y);
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = g.h(x[j]) - g.h(y[j]);
    s += d * d;
  }
  return s;
}

double distance(const Generator& g, std::span<const double> x,
                std::span<const double> y) {
  return std::sqrt(squared_distance(g, x, y));
}

double bregman_divergence(const Generator& g, std::span<const double> x,
                          std::span<const double> y) {
  require_same_dim(x, y);
  check_domain(g, x);
  check_domain(g, y);
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += g.scalar_divergence(x[j], y[j]);
  return s;
}

Point geodesic_point(const Generator& g, std::span<const double> x,
                     std::span<const double> y, double t) {
  require_same_dim(x, y);
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("geodesic parameter must lie in [0, 1]");
  }
  check_domain(g, x);
  check_domain(g, y);
  Point out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    // Endpoints are returned verbatim so gamma(0) and gamma(1) are exact.
    if (t == 0.0) {
      out[j] = x[j];
    } else if (t == 1.0) {
      out[j] = y[j];
    } else {
      out[j] = g.h_inverse((1.0 - t) * g.h(x[j]) + t * g.h(y[j]));
    }
  }
  return out;
}

std::vector<GeodesicSample> geodesic(const Generator& g, std::span<const double> x,
                                     std::span<const double> y,
                                     std::span<const double> ts) {
  std::vector<GeodesicSample> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back({t, geodesic_point(g, x, y, t)});
  return out;
}

Point embedded_mean(const Generator& g, const PointSet& points,
                    std::span<const double> weights) {
  if (points.empty()) throw InvalidArgument("centroid of an empty point set");
  if (!weights.empty() && weights.size() != points.size()) {
    throw InvalidArgument("weight count does not match point count");
  }
  const std::size_t dim = points.dim();
  Point acc(dim, 0.0);
  Point embedded(dim);
  double total = 0.0;
  for (std::size_t n = 0; n < points.size(); ++n) {
    const double w = weights.empty() ? 1.0 : weights[n];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("weights must be finite and nonnegative");
    }
    try {
      embed_into(g, points[n], embedded);
    } catch (const DomainError& e) {
      rethrow_with_row(e, n, dim);
    }
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < dim; ++j) acc[j] += w * embedded[j];
    total += w;
  }
  if (total <= 0.0) throw InvalidArgument("weights sum to zero");
  for (double& a : acc) a /= total;
  return acc;
}

Point centroid(const Generator& g, const PointSet& points,
               std::span<const double> weights) {
  return unembed(g, embedded_mean(g, points, weights));
}

double dual_distance(const Generator& g, std::span<const double> x,
                     std::span<const double> y) {
  require_same_dim(x, y);
  const ConjugatePieces& c = conjugate(g);
  check_domain(g, x);
  check_domain(g, y);
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = c.h_star(g.phi_prime(x[j])) - c.h_star(g.phi_prime(y[j]));
    s += d * d;
  }
  return std::sqrt(s);
}

bool ball_contains(const Generator& g, const Ball& ball, std::span<const double> y) {
  if (!(ball.radius >= 0.0)) throw InvalidArgument("ball radius must be nonnegative");
  return distance(g, ball.center, y) <= ball.radius;
}

std::vector<Point> ball_boundary_polyline(const Generator& g, const Ball& ball,
                                          std::size_t n_samples) {
  if (ball.center.size() != 2) {
    throw InvalidArgument("ball boundary rendering requires K = 2");
  }
  if (n_samples == 0) throw InvalidArgument("n_samples must be positive");
  if (!(ball.radius >= 0.0)) throw InvalidArgument("ball radius must be nonnegative");
  const Point c = embed(g, ball.center);
  for (std::size_t j = 0; j < 2; ++j) {
    if (!g.embedded_range.contains(c[j] - ball.radius) ||
        !g.embedded_range.contains(c[j] + ball.radius)) {
      std::ostringstream os;
      os << "ball of radius " << ball.radius << " around coordinate " << j
         << " leaves the embedded range of generator '" << g.name << "'";
      throw DomainError(os.str(), j);
    }
  }
  std::vector<Point> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(n_samples);
    const double u[2] = {c[0] + ball.radius * std::cos(theta),
                         c[1] + ball.radius * std::sin(theta)};
    out.push_back(unembed(g, u));
  }
  return out;
}

PointSet embed_points(const Generator& g, const PointSet& points) {
  PointSet out(points.dim(), std::vector<double>(points.coords().size()),
               points.labels());
  for (std::size_t n = 0; n < points.size(); ++n) {
    try {
      embed_into(g, points[n], out.row(n));
    } catch (const DomainError& e) {
      rethrow_with_row(e, n, points.dim());
    }
  }
  return out;
}

PointSet unembed_points(const Generator& g, const PointSet& points) {
  PointSet out(points.dim(), std::vector<double>(points.coords().size()),
               points.labels());
  for (std::size_t n = 0; n < points.size(); ++n) {
    try {
      unembed_into(g, points[n], out.row(n));
    } catch (const DomainError& e) {
      rethrow_with_row(e, n, points.dim());
    }
  }
  return out;
}

}  // namespace rbgeo
