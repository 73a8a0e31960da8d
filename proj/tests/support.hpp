#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rbgeo/generator.hpp"
#include "rbgeo/point_set.hpp"
#include "rbgeo/random.hpp"

namespace rbgeo::testing {

inline const std::vector<std::string>& all_generators() {
  static const std::vector<std::string> names = {"euclidean", "exp", "negexp", "shannon",
                                                 "burg"};
  return names;
}

// Sampling range inside the domain where the closed forms are well conditioned.
inline std::pair<double, double> sample_range(const std::string& name) {
  if (name == "shannon" || name == "burg") return {0.05, 20.0};
  return {-5.0, 5.0};
}

inline double draw(CounterRng& rng, const std::string& name) {
  const auto [lo, hi] = sample_range(name);
  return lo + (hi - lo) * rng.uniform();
}

inline Point draw_point(CounterRng& rng, const std::string& name, std::size_t dim) {
  Point p(dim);
  for (double& v : p) v = draw(rng, name);
  return p;
}

inline PointSet draw_points(CounterRng& rng, const std::string& name, std::size_t n,
                            std::size_t dim) {
  PointSet out(dim);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw_point(rng, name, dim));
  return out;
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace rbgeo::testing
