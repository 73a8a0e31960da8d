#include "rbgeo/quantization.hpp"

#include <algorithm>
#include <sstream>

#include "rbgeo/errors.hpp"
#include "rbgeo/geometry.hpp"

namespace rbgeo {
namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void assign(const PointSet& embedded, std::span<const double> centers,
            std::span<std::size_t> labels, std::span<double> sq_dist,
            kernels::Execution exec) {
  if (exec == kernels::Execution::parallel) {
    kernels::parallel::assign_nearest(embedded.coords(), centers, embedded.dim(), labels,
                                      sq_dist);
  } else {
    kernels::serial::assign_nearest(embedded.coords(), centers, embedded.dim(), labels,
                                    sq_dist);
  }
}

}  // namespace

Codebook::Codebook(Generator generator, PointSet codes)
    : generator_(std::move(generator)), codes_(std::move(codes)) {
  if (codes_.empty()) throw InvalidArgument("codebook must contain at least one code");
  if (count_distinct_rows(codes_) != codes_.size()) {
    throw InvalidArgument("codebook codes must be distinct");
  }
  embedded_ = embed_points(generator_, codes_);
}

std::size_t quantize(const Codebook& cb, std::span<const double> x) {
  if (x.size() != cb.codes().dim()) throw InvalidArgument("point dimension mismatch");
  const Point hx = embed(cb.generator(), x);
  std::size_t label = 0;
  double d = 0.0;
  kernels::serial::assign_nearest(hx, cb.embedded_codes().coords(), hx.size(),
                                  {&label, 1}, {&d, 1});
  return label;
}

double distortion(const Codebook& cb, const PointSet& samples) {
  if (samples.empty()) throw InvalidArgument("distortion of an empty sample set");
  if (samples.dim() != cb.codes().dim()) throw InvalidArgument("sample dimension mismatch");
  const PointSet embedded = embed_points(cb.generator(), samples);
  std::vector<std::size_t> labels(samples.size());
  std::vector<double> sq(samples.size());
  kernels::parallel::assign_nearest(embedded.coords(), cb.embedded_codes().coords(),
                                    embedded.dim(), labels, sq);
  return mean_of(sq);
}

std::vector<std::size_t> kmeanspp_indices(const PointSet& embedded, std::size_t k,
                                          CounterRng& rng) {
  const std::size_t n = embedded.size();
  const std::size_t dim = embedded.dim();
  if (k == 0) throw InvalidArgument("k must be positive");
  if (k > n) throw InvalidArgument("k exceeds the number of points");
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  chosen.push_back(rng.uniform_index(n));
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (true) {
    const auto c = embedded[chosen.back()];
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = embedded[i];
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = p[j] - c[j];
        s += d * d;
      }
      d2[i] = std::min(d2[i], s);
    }
    if (chosen.size() == k) break;
    const std::size_t next = rng.discrete(d2);
    if (next == n) {
      throw InvalidArgument("k exceeds the number of distinct points");
    }
    chosen.push_back(next);
  }
  return chosen;
}

std::size_t empty_cell_repair(const PointSet& embedded, std::span<double> centers,
                              std::span<std::size_t> labels, std::span<double> sq_dist) {
  const std::size_t dim = embedded.dim();
  const std::size_t k = centers.size() / dim;
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t l : labels) ++counts[l];
  std::size_t repaired = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] != 0) continue;
    const auto far = std::max_element(sq_dist.begin(), sq_dist.end());
    const auto idx = static_cast<std::size_t>(far - sq_dist.begin());
    if (*far <= 0.0) break;  // every sample already sits on a code
    const auto p = embedded[idx];
    std::copy(p.begin(), p.end(), centers.begin() + static_cast<std::ptrdiff_t>(c * dim));
    --counts[labels[idx]];
    labels[idx] = c;
    sq_dist[idx] = 0.0;
    ++counts[c];
    ++repaired;
  }
  return repaired;
}

LloydState lloyd_from(const PointSet& embedded, std::vector<double> centers,
                      const LloydOptions& options) {
  const std::size_t n = embedded.size();
  const std::size_t dim = embedded.dim();
  const std::size_t k = centers.size() / dim;
  LloydState st;
  st.centers = std::move(centers);
  st.labels.assign(n, 0);
  st.sq_dist.assign(n, 0.0);
  assign(embedded, st.centers, st.labels, st.sq_dist, options.exec);
  double current = mean_of(st.sq_dist);
  st.trace.push_back(current);

  std::vector<double> next_centers;
  std::vector<std::size_t> next_labels(n);
  std::vector<double> next_sq(n);
  std::vector<std::size_t> counts(k);
  while (st.iterations < options.max_iters) {
    next_centers = st.centers;
    if (options.exec == kernels::Execution::parallel) {
      kernels::parallel::cell_means(embedded.coords(), st.labels, dim, k, next_centers, counts);
    } else {
      kernels::serial::cell_means(embedded.coords(), st.labels, dim, k, next_centers, counts);
    }
    assign(embedded, next_centers, next_labels, next_sq, options.exec);
    std::size_t repaired = empty_cell_repair(embedded, next_centers, next_labels, next_sq);
    while (repaired > 0) {
      st.repaired_cells += repaired;
      assign(embedded, next_centers, next_labels, next_sq, options.exec);
      repaired = empty_cell_repair(embedded, next_centers, next_labels, next_sq);
    }
    const double next = mean_of(next_sq);
    // Rounding can only make a no-op update look worse; keep the old state.
    if (next > current) {
      st.converged = next_labels == st.labels;
      break;
    }
    ++st.iterations;
    const bool unchanged = next_labels == st.labels;
    st.centers.swap(next_centers);
    st.labels.swap(next_labels);
    st.sq_dist.swap(next_sq);
    st.trace.push_back(next);
    if (unchanged) {
      st.converged = true;
      break;
    }
    if (current == 0.0 || (current - next) < options.tol * current) break;
    current = next;
  }
  return st;
}

QuantizerReport lloyd(const Generator& g, const PointSet& samples, std::size_t rate,
                      std::uint64_t seed, const LloydOptions& options) {
  if (rate == 0) throw InvalidArgument("rate must be positive");
  if (samples.empty()) throw InvalidArgument("lloyd needs samples");
  const std::size_t distinct = count_distinct_rows(samples);
  if (rate > distinct) {
    std::ostringstream os;
    os << "rate " << rate << " exceeds the " << distinct << " distinct samples";
    throw InvalidArgument(os.str());
  }
  const PointSet embedded = embed_points(g, samples);
  CounterRng rng(seed);
  const auto seeds = kmeanspp_indices(embedded, rate, rng);
  std::vector<double> centers;
  centers.reserve(rate * embedded.dim());
  for (std::size_t idx : seeds) {
    const auto p = embedded[idx];
    centers.insert(centers.end(), p.begin(), p.end());
  }
  LloydState st = lloyd_from(embedded, std::move(centers), options);

  PointSet codes = unembed_points(g, PointSet(embedded.dim(), st.centers));
  QuantizerReport report{Codebook(g, std::move(codes)),
                         std::move(st.labels),
                         st.trace.back(),
                         st.iterations,
                         std::move(st.trace),
                         st.converged,
                         st.repaired_cells};
  return report;
}

}  // namespace rbgeo
