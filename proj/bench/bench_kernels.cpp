// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <vector>

#include "rbgeo/kernels.hpp"
#include "rbgeo/random.hpp"
#include "rbgeo/voronoi.hpp"

using namespace rbgeo;

namespace {

std::vector<double> uniform(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform();
  return v;
}

constexpr std::size_t kDim = 2;

template <bool Parallel>
void BM_AssignNearest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto pts = uniform(n * kDim, 1);
  const auto ctr = uniform(k * kDim, 2);
  std::vector<std::size_t> labels(n);
  std::vector<double> sq(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::parallel::assign_nearest(pts, ctr, kDim, labels, sq);
    } else {
      kernels::serial::assign_nearest(pts, ctr, kDim, labels, sq);
    }
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_CellMeans(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t k = 16;
  const auto pts = uniform(n * kDim, 3);
  std::vector<std::size_t> labels(n);
  CounterRng rng(4);
  for (auto& l : labels) l = rng.uniform_index(k);
  std::vector<double> means(k * kDim);
  std::vector<std::size_t> counts(k);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::parallel::cell_means(pts, labels, kDim, k, means, counts);
    } else {
      kernels::serial::cell_means(pts, labels, kDim, k, means, counts);
    }
    benchmark::DoNotOptimize(means.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Parallel>
void BM_Rasterize(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  PointSet sites(2);
  CounterRng rng(5);
  for (int i = 0; i < 16; ++i) sites.push_back(Point{0.5 + 8.0 * rng.uniform(), 0.5 + 8.0 * rng.uniform()});
  const SiteSet set(make_generator("shannon"), sites);
  const BoundingBox box{0.25, 9.0, 0.25, 9.0};
  const auto exec = Parallel ? kernels::Execution::parallel : kernels::Execution::serial;
  for (auto _ : state) {
    auto r = rasterize(set, Flavor::riemann, box, side, side, exec);
    benchmark::DoNotOptimize(r.labels.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}

}  // namespace

BENCHMARK(BM_AssignNearest<false>)->Args({100000, 8})->Args({100000, 64})->UseRealTime();
BENCHMARK(BM_AssignNearest<true>)->Args({100000, 8})->Args({100000, 64})->UseRealTime();
BENCHMARK(BM_CellMeans<false>)->Arg(100000)->Arg(1000000)->UseRealTime();
BENCHMARK(BM_CellMeans<true>)->Arg(100000)->Arg(1000000)->UseRealTime();
BENCHMARK(BM_Rasterize<false>)->Arg(256)->Arg(512)->UseRealTime();
BENCHMARK(BM_Rasterize<true>)->Arg(256)->Arg(512)->UseRealTime();

BENCHMARK_MAIN();
