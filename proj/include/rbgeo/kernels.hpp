#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in
// rbgeo::kernels::serial and an OpenMP version in rbgeo::kernels::parallel with
// an identical signature. The parallel versions only split independent
// iterations; every reduction runs in a fixed order, so both produce
// bit-identical output.

#include <cstddef>
#include <cstdint>
#include <span>

namespace rbgeo::kernels {

enum class Execution { serial, parallel };

// Caps the worker count used by the parallel kernels; 0 restores the OpenMP
// default. No-op without OpenMP.
void set_thread_limit(int threads);
int thread_limit();

// Index of the nearest center under squared Euclidean distance (lowest index
// wins ties) for every row of `points`. sq_dist receives the minimal squared
// distance. Both buffers are row-major with `dim` columns.
namespace serial {
void assign_nearest(std::span<const double> points, std::span<const double> centers,
                    std::size_t dim, std::span<std::size_t> labels,
                    std::span<double> sq_dist);

// Per-cell arithmetic means of the points carrying each label. Sums run over
// points in index order. Cells without members keep their previous `means`
// row and get count 0.
void cell_means(std::span<const double> points, std::span<const std::size_t> labels,
                std::size_t dim, std::size_t k, std::span<double> means,
                std::span<std::size_t> counts);
}  // namespace serial

namespace parallel {
void assign_nearest(std::span<const double> points, std::span<const double> centers,
                    std::size_t dim, std::span<std::size_t> labels,
                    std::span<double> sq_dist);
void cell_means(std::span<const double> points, std::span<const std::size_t> labels,
                std::size_t dim, std::size_t k, std::span<double> means,
                std::span<std::size_t> counts);
}  // namespace parallel

// Fills a row-major width x height buffer with pixel_label(col, row).
namespace serial {
template <class PixelFn>
void fill_raster(std::span<std::uint32_t> out, std::size_t width, std::size_t height,
                 PixelFn&& pixel_label) {
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) out[r * width + c] = pixel_label(c, r);
}
}  // namespace serial

namespace parallel {
template <class PixelFn>
void fill_raster(std::span<std::uint32_t> out, std::size_t width, std::size_t height,
                 PixelFn&& pixel_label) {
  const auto rows = static_cast<std::ptrdiff_t>(height);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const auto row = static_cast<std::size_t>(r);
    for (std::size_t c = 0; c < width; ++c) out[row * width + c] = pixel_label(c, row);
  }
}

// Runs body(i) for i in [0, n). Iterations must be independent.
template <class Body>
void for_each_index(std::size_t n, Body&& body) {
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}
}  // namespace parallel

namespace serial {
template <class Body>
void for_each_index(std::size_t n, Body&& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}
}  // namespace serial

}  // namespace rbgeo::kernels
