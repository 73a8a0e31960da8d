#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rbgeo/generator.hpp"
#include "rbgeo/kernels.hpp"
#include "rbgeo/point_set.hpp"
#include "rbgeo/random.hpp"

namespace rbgeo {

// Fixed-rate codebook: N distinct code vectors in the domain. The embedded
// codes are cached for nearest-code queries.
class Codebook {
 public:
  Codebook(Generator generator, PointSet codes);

  const Generator& generator() const noexcept { return generator_; }
  const PointSet& codes() const noexcept { return codes_; }
  const PointSet& embedded_codes() const noexcept { return embedded_; }
  std::size_t rate() const noexcept { return codes_.size(); }

 private:
  Generator generator_;
  PointSet codes_;
  PointSet embedded_;
};

// Index of the code minimising d_phi(x, y_i)^2; lowest index wins ties.
std::size_t quantize(const Codebook& cb, std::span<const double> x);

// Mean over samples of d_phi(x_n, q(x_n))^2.
double distortion(const Codebook& cb, const PointSet& samples);

struct LloydOptions {
  std::size_t max_iters = 200;
  // Stop once the relative distortion improvement falls below tol. With
  // tol = 0 the loop runs until the partition stops changing.
  double tol = 1e-8;
  kernels::Execution exec = kernels::Execution::parallel;
};

struct QuantizerReport {
  Codebook codebook;
  std::vector<std::size_t> assignments;
  double distortion = 0.0;
  std::size_t iterations = 0;
  // Distortion after every assignment step, starting with the seeding.
  std::vector<double> distortion_trace;
  // True when the final update left the partition unchanged.
  bool converged = false;
  std::size_t repaired_cells = 0;
};

// Lloyd iteration in embedded space, seeded by k-means++ drawn from
// CounterRng(seed). Requires rate <= number of distinct samples.
QuantizerReport lloyd(const Generator& g, const PointSet& samples, std::size_t rate,
                      std::uint64_t seed, const LloydOptions& options = {});

// ---------------------------------------------------------------------------
// Euclidean machinery on already-embedded data, shared with the clustering
// module.

// k-means++: first center uniform, the rest with probability proportional to
// the squared distance to the nearest chosen center. Returns row indices.
std::vector<std::size_t> kmeanspp_indices(const PointSet& embedded, std::size_t k,
                                          CounterRng& rng);

struct LloydState {
  std::vector<double> centers;  // k x dim, row-major
  std::vector<std::size_t> labels;
  std::vector<double> sq_dist;
  std::vector<double> trace;  // mean squared distance per assignment step
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t repaired_cells = 0;
};

// Runs Lloyd from the given centers. Empty cells are repaired after every
// update step.
LloydState lloyd_from(const PointSet& embedded, std::vector<double> centers,
                      const LloydOptions& options);

// Moves the code of every empty cell onto the sample currently farthest from
// its own code (ties to the lowest sample index). The chosen sample is
// reassigned to the repaired cell with zero distance, so repeated calls within
// one step pick distinct samples. Returns the number of codes replaced.
std::size_t empty_cell_repair(const PointSet& embedded, std::span<double> centers,
                              std::span<std::size_t> labels, std::span<double> sq_dist);

}  // namespace rbgeo
