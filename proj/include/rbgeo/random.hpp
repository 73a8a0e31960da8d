#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace rbgeo {

// Counter-based generator: draw i is splitmix64(key + i * golden_gamma), so a
// (seed, stream) pair fixes every value on every platform. Normals use the
// Box-Muller transform on pairs of uniforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  // Uniform index in [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n) noexcept;
  // Index drawn with probability proportional to weights[i]. Returns
  // weights.size() when every weight is zero.
  std::size_t discrete(std::span<const double> weights) noexcept;

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace rbgeo
