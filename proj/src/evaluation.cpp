#include "rbgeo/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <sstream>

#include "rbgeo/errors.hpp"
#include "rbgeo/random.hpp"

namespace rbgeo {
namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidArgument("assignments and labels differ in length");
}

double choose2(double x) { return 0.5 * x * (x - 1.0); }

// Dense contingency table over the distinct values of each partition.
struct Table {
  std::vector<double> cells;
  std::vector<double> row_sums;
  std::vector<double> col_sums;
  double total = 0.0;
};

Table dense_table(std::span<const std::size_t> a, std::span<const int> l) {
  require_same_length(a.size(), l.size());
  std::map<std::size_t, std::size_t> rows;
  std::map<int, std::size_t> cols;
  for (std::size_t v : a) rows.emplace(v, 0);
  for (int v : l) cols.emplace(v, 0);
  std::size_t idx = 0;
  for (auto& [_, i] : rows) i = idx++;
  idx = 0;
  for (auto& [_, i] : cols) i = idx++;
  Table t;
  t.row_sums.assign(rows.size(), 0.0);
  t.col_sums.assign(cols.size(), 0.0);
  t.cells.assign(rows.size() * cols.size(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    const std::size_t r = rows[a[n]];
    const std::size_t c = cols[l[n]];
    t.cells[r * cols.size() + c] += 1.0;
    t.row_sums[r] += 1.0;
    t.col_sums[c] += 1.0;
  }
  t.total = static_cast<double>(a.size());
  return t;
}

// Hungarian method (shortest augmenting path form) minimising cost over a
// square n x n matrix. Returns the column assigned to each row.
std::vector<std::size_t> hungarian_min(const std::vector<double>& cost, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col_of_row(n);
  for (std::size_t j = 1; j <= n; ++j) col_of_row[p[j] - 1] = j - 1;
  return col_of_row;
}

}  // namespace

SyntheticSpec default_synthetic_spec(std::uint64_t seed) {
  SyntheticSpec s;
  s.seed = seed;
  s.clusters = {
      {{8.0, 6.5}, {0.5, 0.5}, 100},
      {{9.0, 7.5}, {0.4, 0.45}, 300},
      {{8.5, 9.0}, {0.35, 0.35}, 200},
      {{8.0, 10.0}, {0.6, 0.6}, 150},
  };
  return s;
}

void validate(const SyntheticSpec& spec) {
  if (spec.clusters.empty()) throw InvalidArgument("spec.clusters: at least one cluster required");
  const std::size_t dim = spec.clusters.front().mean.size();
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    const ClusterSpec& cl = spec.clusters[c];
    const std::string where = "spec.clusters[" + std::to_string(c) + "]";
    if (cl.mean.empty() || cl.mean.size() != dim) {
      throw InvalidArgument(where + ".mean: expected " + std::to_string(dim) + " coordinates");
    }
    if (cl.sigma.size() != dim) {
      throw InvalidArgument(where + ".sigma: expected " + std::to_string(dim) + " coordinates");
    }
    for (double s : cl.sigma) {
      if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument(where + ".sigma: must be > 0");
    }
    for (double m : cl.mean) {
      if (!std::isfinite(m)) throw InvalidArgument(where + ".mean: must be finite");
    }
    if (cl.count < 1) throw InvalidArgument(where + ".count: must be >= 1");
  }
}

PointSet generate_dataset(const SyntheticSpec& spec) {
  validate(spec);
  const std::size_t dim = spec.clusters.front().mean.size();
  CounterRng rng(spec.seed);
  PointSet out(dim);
  std::vector<double> p(dim);
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    const ClusterSpec& cl = spec.clusters[c];
    for (std::size_t n = 0; n < cl.count; ++n) {
      bool ok = false;
      // Redraw whole points until every coordinate is positive.
      for (int attempt = 0; attempt < 1000000 && !ok; ++attempt) {
        ok = true;
        for (std::size_t j = 0; j < dim; ++j) {
          p[j] = cl.mean[j] + cl.sigma[j] * rng.normal();
          ok = ok && p[j] > 0.0;
        }
      }
      if (!ok) {
        throw InvalidArgument("spec.clusters[" + std::to_string(c) +
                              "]: cannot draw points with positive coordinates");
      }
      out.push_back(p, static_cast<int>(c));
    }
  }
  return out;
}

std::vector<std::size_t> contingency_table(std::span<const std::size_t> assignments,
                                           std::span<const int> labels, std::size_t k) {
  require_same_length(assignments.size(), labels.size());
  std::vector<std::size_t> t(k * k, 0);
  for (std::size_t n = 0; n < assignments.size(); ++n) {
    const int l = labels[n];
    if (assignments[n] >= k || l < 0 || static_cast<std::size_t>(l) >= k) {
      throw InvalidArgument("assignment or label outside [0, k)");
    }
    ++t[assignments[n] * k + static_cast<std::size_t>(l)];
  }
  return t;
}

std::vector<std::size_t> optimal_matching(std::span<const std::size_t> table, std::size_t k) {
  if (table.size() != k * k) throw InvalidArgument("table must be k x k");
  std::size_t peak = 0;
  for (std::size_t v : table) peak = std::max(peak, v);
  std::vector<double> cost(k * k);
  for (std::size_t i = 0; i < k * k; ++i) cost[i] = static_cast<double>(peak - table[i]);
  return hungarian_min(cost, k);
}

double accuracy(std::span<const std::size_t> assignments, std::span<const int> labels,
                std::size_t k) {
  if (assignments.empty()) throw InvalidArgument("accuracy of an empty labelling");
  const auto table = contingency_table(assignments, labels, k);
  const auto match = optimal_matching(table, k);
  std::size_t correct = 0;
  for (std::size_t a = 0; a < k; ++a) correct += table[a * k + match[a]];
  return static_cast<double>(correct) / static_cast<double>(assignments.size());
}

double adjusted_rand_index(std::span<const std::size_t> assignments,
                           std::span<const int> labels) {
  const Table t = dense_table(assignments, labels);
  double index = 0.0;
  for (double c : t.cells) index += choose2(c);
  double sum_a = 0.0;
  for (double r : t.row_sums) sum_a += choose2(r);
  double sum_b = 0.0;
  for (double c : t.col_sums) sum_b += choose2(c);
  const double pairs = choose2(t.total);
  const double expected = pairs > 0.0 ? sum_a * sum_b / pairs : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;  // both partitions trivial in the same way
  return (index - expected) / denom;
}

double normalized_mutual_information(std::span<const std::size_t> assignments,
                                     std::span<const int> labels) {
  const Table t = dense_table(assignments, labels);
  const double n = t.total;
  auto entropy = [n](const std::vector<double>& sums) {
    double h = 0.0;
    for (double s : sums)
      if (s > 0.0) h -= (s / n) * std::log(s / n);
    return h;
  };
  const double ha = entropy(t.row_sums);
  const double hl = entropy(t.col_sums);
  if (t.row_sums.size() == 1 && t.col_sums.size() == 1) return 1.0;
  if (ha == 0.0 || hl == 0.0) return 0.0;
  const std::size_t cols = t.col_sums.size();
  double mi = 0.0;
  for (std::size_t r = 0; r < t.row_sums.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double nij = t.cells[r * cols + c];
      if (nij == 0.0) continue;
      mi += (nij / n) * std::log(nij * n / (t.row_sums[r] * t.col_sums[c]));
    }
  }
  return std::clamp(mi / std::sqrt(ha * hl), 0.0, 1.0);
}

EvaluationReport evaluate(const ClusteringResult& result, std::span<const int> labels) {
  EvaluationReport rep;
  rep.method = result.method;
  rep.generator = result.generator;
  rep.seed = result.seed;
  const std::size_t k = result.k;
  const auto table = contingency_table(result.assignments, labels, k);
  const auto match = optimal_matching(table, k);
  std::size_t correct = 0;
  for (std::size_t a = 0; a < k; ++a) correct += table[a * k + match[a]];
  rep.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
  rep.adjusted_rand_index = adjusted_rand_index(result.assignments, labels);
  rep.normalized_mutual_information = normalized_mutual_information(result.assignments, labels);
  rep.sizes.assign(k, 0);
  std::vector<double> centers(k * result.centers.dim());
  for (std::size_t a = 0; a < k; ++a) {
    rep.sizes[match[a]] = result.sizes[a];
    const auto c = result.centers[a];
    std::copy(c.begin(), c.end(), centers.begin() + static_cast<std::ptrdiff_t>(match[a] * c.size()));
  }
  rep.centers = PointSet(result.centers.dim(), std::move(centers));
  rep.result = result;
  return rep;
}

EvaluationReport run_cell(const PointSet& data, Method method, const Generator& g,
                          std::size_t k, std::uint64_t seed, const ExperimentOptions& options) {
  if (!data.has_labels()) throw InvalidArgument("evaluation needs groundtruth labels");
  ClusteringResult r;
  switch (method) {
    case Method::kmeans: {
      KMeansOptions o;
      o.standardize = options.standardize;
      o.restarts = options.restarts;
      o.exec = kernels::Execution::serial;
      r = kmeans(data, g, k, seed, o);
      break;
    }
    case Method::em: {
      EmOptions o;
      o.standardize = options.standardize;
      o.exec = kernels::Execution::serial;
      r = em_gmm(data, g, k, seed, o).first;
      break;
    }
    case Method::hcpc: {
      HcpcOptions o;
      o.standardize = options.standardize;
      o.consolidate = options.consolidate;
      o.n_components = options.n_components;
      o.exec = kernels::Execution::serial;
      r = hcpc(data, g, k, seed, o);
      break;
    }
    case Method::hac:
      r = hac(data, g, k, options.linkage, {options.standardize});
      r.seed = seed;
      break;
  }
  return evaluate(r, data.labels());
}

std::vector<EvaluationReport> run_experiment(const SyntheticSpec& spec,
                                             std::span<const Method> methods,
                                             std::span<const std::string> generators,
                                             std::size_t k,
                                             std::span<const std::uint64_t> seeds,
                                             const ExperimentOptions& options) {
  if (methods.empty() || generators.empty() || seeds.empty()) {
    throw InvalidArgument("experiment needs at least one method, generator and seed");
  }
  const PointSet data = generate_dataset(spec);
  std::vector<Generator> gens;
  for (const auto& name : generators) gens.push_back(make_generator(name));

  struct Cell {
    std::size_t method, generator, seed;
    bool shared;  // deterministic method: only the first seed is computed
  };
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < methods.size(); ++m)
    for (std::size_t gi = 0; gi < gens.size(); ++gi)
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        const bool deterministic = methods[m] == Method::hac || methods[m] == Method::hcpc;
        cells.push_back({m, gi, s, deterministic && s > 0});
      }

  std::vector<EvaluationReport> reports(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  kernels::parallel::for_each_index(cells.size(), [&](std::size_t i) {
    const Cell& c = cells[i];
    if (c.shared) return;
    try {
      reports[i] = run_cell(data, methods[c.method], gens[c.generator], k, seeds[c.seed], options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].shared) continue;
    reports[i] = reports[i - cells[i].seed];
    reports[i].seed = seeds[cells[i].seed];
    reports[i].result.seed = seeds[cells[i].seed];
  }
  return reports;
}

}  // namespace rbgeo
