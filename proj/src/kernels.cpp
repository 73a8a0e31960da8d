#include "rbgeo/kernels.hpp"

#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rbgeo::kernels {
namespace {

#ifdef _OPENMP
int default_threads() {
  static const int n = omp_get_max_threads();
  return n;
}
#endif

inline void nearest_row(std::span<const double> points, std::span<const double> centers,
                        std::size_t dim, std::size_t i, std::span<std::size_t> labels,
                        std::span<double> sq_dist) {
  const std::size_t k = centers.size() / dim;
  const double* p = points.data() + i * dim;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double* q = centers.data() + c * dim;
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = p[j] - q[j];
      s += d * d;
    }
    if (s < best) {
      best = s;
      best_idx = c;
    }
  }
  labels[i] = best_idx;
  sq_dist[i] = best;
}

inline void mean_of_cell(std::span<const double> points,
                         std::span<const std::size_t> labels, std::size_t dim,
                         std::size_t cell, std::span<double> means,
                         std::span<std::size_t> counts) {
  const std::size_t n = labels.size();
  std::vector<double> sum(dim, 0.0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != cell) continue;
    const double* p = points.data() + i * dim;
    for (std::size_t j = 0; j < dim; ++j) sum[j] += p[j];
    ++count;
  }
  counts[cell] = count;
  if (count == 0) return;
  for (std::size_t j = 0; j < dim; ++j)
    means[cell * dim + j] = sum[j] / static_cast<double>(count);
}

}  // namespace

void set_thread_limit(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(threads > 0 ? threads : default_threads());
#else
  (void)threads;
#endif
}

int thread_limit() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

void assign_nearest(std::span<const double> points, std::span<const double> centers,
                    std::size_t dim, std::span<std::size_t> labels,
                    std::span<double> sq_dist) {
  const std::size_t n = points.size() / dim;
  for (std::size_t i = 0; i < n; ++i) nearest_row(points, centers, dim, i, labels, sq_dist);
}

void cell_means(std::span<const double> points, std::span<const std::size_t> labels,
                std::size_t dim, std::size_t k, std::span<double> means,
                std::span<std::size_t> counts) {
  for (std::size_t c = 0; c < k; ++c) mean_of_cell(points, labels, dim, c, means, counts);
}

}  // namespace serial

namespace parallel {

void assign_nearest(std::span<const double> points, std::span<const double> centers,
                    std::size_t dim, std::span<std::size_t> labels,
                    std::span<double> sq_dist) {
  const auto n = static_cast<std::ptrdiff_t>(points.size() / dim);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    nearest_row(points, centers, dim, static_cast<std::size_t>(i), labels, sq_dist);
}

void cell_means(std::span<const double> points, std::span<const std::size_t> labels,
                std::size_t dim, std::size_t k, std::span<double> means,
                std::span<std::size_t> counts) {
  const auto cells = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < cells; ++c)
    mean_of_cell(points, labels, dim, static_cast<std::size_t>(c), means, counts);
}

}  // namespace parallel
}  // namespace rbgeo::kernels
