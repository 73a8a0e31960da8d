#include "rbgeo/clustering.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rbgeo/errors.hpp"
#include "rbgeo/geometry.hpp"
#include "rbgeo/quantization.hpp"
#include "rbgeo/random.hpp"

namespace rbgeo {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Prepared {
  PointSet embedded;  // h(points)
  PointSet space;     // what the method partitions
};

void require_k(std::size_t k, std::size_t available, std::string_view what) {
  if (k == 0) throw InvalidArgument("k must be positive");
  if (k > available) {
    std::ostringstream os;
    os << "k = " << k << " exceeds the " << available << " " << what;
    throw InvalidArgument(os.str());
  }
}

PointSet standardized(const PointSet& p) {
  const std::size_t n = p.size();
  const std::size_t d = p.dim();
  PointSet out = p;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += p[i][j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = p[i][j] - mean;
      var += c * c;
    }
    var /= static_cast<double>(n);
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.row(i)[j] = (p[i][j] - mean) * scale;
  }
  return out;
}

Prepared prepare(const PointSet& points, const Generator& g, bool standardize) {
  if (points.empty()) throw InvalidArgument("cannot cluster an empty point set");
  Prepared prep;
  prep.embedded = embed_points(g, points);
  prep.space = standardize ? standardized(prep.embedded) : prep.embedded;
  return prep;
}

double within_cluster_ss(const PointSet& space, std::span<const std::size_t> labels,
                         std::size_t k) {
  const std::size_t d = space.dim();
  std::vector<double> means(k * d, 0.0);
  std::vector<std::size_t> counts(k);
  kernels::serial::cell_means(space.coords(), labels, d, k, means, counts);
  double s = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto p = space[i];
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = p[j] - means[labels[i] * d + j];
      s += diff * diff;
    }
  }
  return s;
}

// Sizes and Riemann-Bregman centroids of the final partition. Cells that end
// up empty (possible only for EM) take their center from `fallback`, given in
// embedded coordinates.
ClusteringResult finish(Method method, const Generator& g, std::size_t k,
                        std::vector<std::size_t> labels, const Prepared& prep,
                        std::uint64_t seed, std::size_t iterations,
                        const std::vector<double>* fallback = nullptr) {
  const std::size_t d = prep.embedded.dim();
  std::vector<double> means(k * d, 0.0);
  if (fallback) means = *fallback;
  std::vector<std::size_t> counts(k);
  kernels::serial::cell_means(prep.embedded.coords(), labels, d, k, means, counts);
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0 && !fallback) {
      throw NumericalFailure("clustering produced an empty cluster");
    }
  }
  ClusteringResult r;
  r.method = method;
  r.generator = g.name;
  r.k = k;
  r.objective = within_cluster_ss(prep.space, labels, k);
  r.assignments = std::move(labels);
  r.centers = unembed_points(g, PointSet(d, std::move(means)));
  r.sizes = std::move(counts);
  r.seed = seed;
  r.iterations = iterations;
  return r;
}

// ---------------------------------------------------------------------------
// Gaussian mixture

struct Factorized {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_det = 0.0;
  double trace_inverse = 0.0;
};

Factorized factorize(const Eigen::MatrixXd& cov) {
  Factorized f;
  f.llt.compute(cov);
  if (f.llt.info() != Eigen::Success) {
    throw NumericalFailure("covariance is not positive definite after regularization");
  }
  const auto L = f.llt.matrixL();
  const Eigen::MatrixXd Lm = L;
  for (Eigen::Index i = 0; i < Lm.rows(); ++i) f.log_det += 2.0 * std::log(Lm(i, i));
  const Eigen::MatrixXd inv = f.llt.solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  f.trace_inverse = inv.trace();
  return f;
}

struct Mixture {
  std::vector<double> weight;
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::MatrixXd> cov;
};

void m_step(const Eigen::Map<const RowMatrix>& X, const RowMatrix& resp, double ridge,
            Mixture& mix) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  const auto k = static_cast<std::size_t>(resp.cols());
  for (std::size_t c = 0; c < k; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    double nk = 0.0;
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = resp(i, col);
      nk += r;
      mu.noalias() += r * X.row(i).transpose();
    }
    if (!(nk > std::numeric_limits<double>::min())) {
      mix.weight[c] = 0.0;  // dead component keeps its last mean and covariance
      continue;
    }
    mu /= nk;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd diff = X.row(i).transpose() - mu;
      S.noalias() += resp(i, col) * diff * diff.transpose();
    }
    S.diagonal().array() += ridge;
    mix.mean[c] = mu;
    mix.cov[c] = S / nk;
    mix.weight[c] = nk / static_cast<double>(n);
  }
}

// Fills responsibilities and returns the penalized log-likelihood.
double e_step(const Eigen::Map<const RowMatrix>& X, const Mixture& mix, double ridge,
              RowMatrix& resp, kernels::Execution exec) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  const std::size_t k = mix.weight.size();
  std::vector<Factorized> fac;
  fac.reserve(k);
  double penalty = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    fac.push_back(factorize(mix.cov[c]));
    if (mix.weight[c] > 0.0) penalty += 0.5 * ridge * fac.back().trace_inverse;
  }
  const double log_norm = static_cast<double>(d) * std::log(2.0 * std::numbers::pi);
  std::vector<double> point_ll(static_cast<std::size_t>(n));
  auto body = [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    double lp[64];
    std::vector<double> big;
    double* logp = lp;
    if (k > 64) {
      big.resize(k);
      logp = big.data();
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (mix.weight[c] <= 0.0) {
        logp[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      const Eigen::VectorXd diff = X.row(row).transpose() - mix.mean[c];
      const Eigen::VectorXd y = fac[c].llt.matrixL().solve(diff);
      logp[c] = std::log(mix.weight[c]) - 0.5 * (log_norm + fac[c].log_det + y.squaredNorm());
      best = std::max(best, logp[c]);
    }
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c) s += std::exp(logp[c] - best);
    const double ll = best + std::log(s);
    point_ll[i] = ll;
    for (std::size_t c = 0; c < k; ++c)
      resp(row, static_cast<Eigen::Index>(c)) = std::exp(logp[c] - ll);
  };
  if (exec == kernels::Execution::parallel) {
    kernels::parallel::for_each_index(static_cast<std::size_t>(n), body);
  } else {
    kernels::serial::for_each_index(static_cast<std::size_t>(n), body);
  }
  double total = 0.0;
  for (double v : point_ll) total += v;
  const double objective = total - penalty;
  if (!std::isfinite(objective)) throw NumericalFailure("log-likelihood is not finite");
  return objective;
}

// ---------------------------------------------------------------------------
// Agglomeration

double lance_williams(Linkage linkage, double d_am, double d_bm, double d_ab, double n_a,
                      double n_b, double n_m) {
  switch (linkage) {
    case Linkage::single: return std::min(d_am, d_bm);
    case Linkage::complete: return std::max(d_am, d_bm);
    case Linkage::average: return (n_a * d_am + n_b * d_bm) / (n_a + n_b);
    case Linkage::ward:
      return ((n_a + n_m) * d_am + (n_b + n_m) * d_bm - n_m * d_ab) / (n_a + n_b + n_m);
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kmeans: return "kmeans";
    case Method::em: return "em";
    case Method::hcpc: return "hcpc";
    case Method::hac: return "hac";
  }
  return "kmeans";
}

std::string_view to_string(Linkage l) {
  switch (l) {
    case Linkage::single: return "single";
    case Linkage::average: return "average";
    case Linkage::complete: return "complete";
    case Linkage::ward: return "ward";
  }
  return "ward";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kmeans, Method::em, Method::hcpc, Method::hac})
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown method '" + std::string(name) +
                        "' (expected kmeans|em|hcpc|hac)");
}

Linkage parse_linkage(std::string_view name) {
  for (Linkage l : {Linkage::single, Linkage::average, Linkage::complete, Linkage::ward})
    if (to_string(l) == name) return l;
  throw InvalidArgument("unknown linkage '" + std::string(name) +
                        "' (expected single|average|complete|ward)");
}

ClusteringResult kmeans(const PointSet& points, const Generator& g, std::size_t k,
                        std::uint64_t seed, const KMeansOptions& options) {
  const Prepared prep = prepare(points, g, options.standardize);
  require_k(k, count_distinct_rows(prep.space), "distinct points");
  if (options.restarts == 0) throw InvalidArgument("restarts must be at least 1");
  // Restart r seeds from stream r; the lowest final objective wins, ties to the
  // earliest restart.
  LloydState best;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    CounterRng rng(seed, r);
    std::vector<double> centers;
    for (std::size_t idx : kmeanspp_indices(prep.space, k, rng)) {
      const auto p = prep.space[idx];
      centers.insert(centers.end(), p.begin(), p.end());
    }
    LloydState st =
        lloyd_from(prep.space, std::move(centers), {options.max_iters, options.tol, options.exec});
    if (r == 0 || st.trace.back() < best.trace.back()) best = std::move(st);
  }
  LloydState& st = best;
  return finish(Method::kmeans, g, k, std::move(st.labels), prep, seed, st.iterations);
}

std::pair<ClusteringResult, GaussianMixtureModel> em_gmm(const PointSet& points,
                                                         const Generator& g, std::size_t k,
                                                         std::uint64_t seed,
                                                         const EmOptions& options) {
  const Prepared prep = prepare(points, g, options.standardize);
  require_k(k, count_distinct_rows(prep.space), "distinct points");
  const auto n = static_cast<Eigen::Index>(prep.space.size());
  const auto d = static_cast<Eigen::Index>(prep.space.dim());
  const Eigen::Map<const RowMatrix> X(prep.space.coords().data(), n, d);

  const Eigen::RowVectorXd grand_mean = X.colwise().mean();
  const double total_var = (X.rowwise() - grand_mean).squaredNorm() / static_cast<double>(n);
  double ridge = 1e-6 * total_var / static_cast<double>(d);
  if (!(ridge > 0.0)) ridge = 1e-12;

  // Hard responsibilities from k-means++ seeds.
  CounterRng rng(seed);
  const auto seeds = kmeanspp_indices(prep.space, k, rng);
  std::vector<double> seed_centers;
  for (std::size_t idx : seeds) {
    const auto p = prep.space[idx];
    seed_centers.insert(seed_centers.end(), p.begin(), p.end());
  }
  std::vector<std::size_t> labels(prep.space.size());
  std::vector<double> sq(prep.space.size());
  kernels::serial::assign_nearest(prep.space.coords(), seed_centers, prep.space.dim(), labels,
                                  sq);
  RowMatrix resp = RowMatrix::Zero(n, static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < n; ++i)
    resp(i, static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)])) = 1.0;

  Mixture mix{std::vector<double>(k, 0.0),
              std::vector<Eigen::VectorXd>(k, Eigen::VectorXd::Zero(d)),
              std::vector<Eigen::MatrixXd>(k, Eigen::MatrixXd::Identity(d, d))};
  m_step(X, resp, ridge, mix);

  GaussianMixtureModel model;
  model.ridge = ridge;
  std::size_t iterations = 0;
  while (true) {
    const double obj = e_step(X, mix, ridge, resp, options.exec);
    const bool has_prev = !model.log_likelihood.empty();
    const double prev = has_prev ? model.log_likelihood.back() : 0.0;
    model.log_likelihood.push_back(obj);
    if (has_prev && std::abs(obj - prev) <= options.tol * std::abs(prev)) {
      model.converged = true;
      break;
    }
    if (iterations >= options.max_iters) break;
    m_step(X, resp, ridge, mix);
    ++iterations;
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    resp.row(i).maxCoeff(&best);
    labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }

  // Component means mapped back to embedded coordinates serve as centers for
  // components that win no point.
  std::vector<double> fallback(k * static_cast<std::size_t>(d));
  std::vector<double> col_mean(static_cast<std::size_t>(d), 0.0);
  std::vector<double> col_scale(static_cast<std::size_t>(d), 1.0);
  if (options.standardize) {
    const std::size_t np = prep.embedded.size();
    for (std::size_t j = 0; j < col_mean.size(); ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < np; ++i) m += prep.embedded[i][j];
      m /= static_cast<double>(np);
      double v = 0.0;
      for (std::size_t i = 0; i < np; ++i) v += (prep.embedded[i][j] - m) * (prep.embedded[i][j] - m);
      v /= static_cast<double>(np);
      col_mean[j] = m;
      col_scale[j] = v > 0.0 ? std::sqrt(v) : 1.0;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    GaussianComponent comp;
    comp.weight = mix.weight[c];
    comp.mean.assign(mix.mean[c].data(), mix.mean[c].data() + d);
    comp.covariance.resize(static_cast<std::size_t>(d * d));
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b)
        comp.covariance[static_cast<std::size_t>(a * d + b)] = mix.cov[c](a, b);
    for (std::size_t j = 0; j < col_mean.size(); ++j)
      fallback[c * col_mean.size() + j] = comp.mean[j] * col_scale[j] + col_mean[j];
    model.components.push_back(std::move(comp));
  }

  ClusteringResult r =
      finish(Method::em, g, k, std::move(labels), prep, seed, iterations, &fallback);
  return {std::move(r), std::move(model)};
}

std::vector<std::size_t> agglomerate(const PointSet& points, std::size_t k, Linkage linkage) {
  const std::size_t n = points.size();
  const std::size_t dim = points.dim();
  require_k(k, n, "points");

  // Ward runs on squared distances, the other linkages on plain distances.
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double diff = points[a][j] - points[b][j];
        s += diff * diff;
      }
      const double v = linkage == Linkage::ward ? s : std::sqrt(s);
      dist[a * n + b] = v;
      dist[b * n + a] = v;
    }
  }
  auto D = [&](std::size_t a, std::size_t b) -> double& { return dist[a * n + b]; };

  std::vector<char> active(n, 1);
  std::vector<double> size(n, 1.0);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::size_t> nn(n, 0);
  std::vector<double> nnd(n, std::numeric_limits<double>::infinity());

  auto refresh = [&](std::size_t i) {
    nnd[i] = std::numeric_limits<double>::infinity();
    nn[i] = i;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      if (D(i, j) < nnd[i]) {
        nnd[i] = D(i, j);
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t clusters = n; clusters > k; --clusters) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      if (best == n || nnd[i] < nnd[best]) best = i;
    }
    const std::size_t a = std::min(best, nn[best]);
    const std::size_t b = std::max(best, nn[best]);
    const double d_ab = D(a, b);
    for (std::size_t m = 0; m < n; ++m) {
      if (!active[m] || m == a || m == b) continue;
      const double v = lance_williams(linkage, D(a, m), D(b, m), d_ab, size[a], size[b], size[m]);
      D(a, m) = v;
      D(m, a) = v;
    }
    size[a] += size[b];
    active[b] = 0;
    parent[b] = a;
    refresh(a);
    for (std::size_t m = 0; m < n; ++m) {
      if (!active[m] || m == a) continue;
      if (nn[m] == a || nn[m] == b) {
        refresh(m);
      } else if (D(m, a) < nnd[m] || (D(m, a) == nnd[m] && a < nn[m])) {
        nnd[m] = D(m, a);
        nn[m] = a;
      }
    }
  }

  // Roots in ascending index order are the clusters; a root is the lowest
  // index of its cluster because merges always keep the smaller index.
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i];
    return i;
  };
  std::vector<std::size_t> cluster_of_root(n, n);
  std::size_t next = 0;
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = root(i);
    if (cluster_of_root[r] == n) cluster_of_root[r] = next++;
    labels[i] = cluster_of_root[r];
  }
  return labels;
}

ClusteringResult hac(const PointSet& points, const Generator& g, std::size_t k,
                     Linkage linkage, const HacOptions& options) {
  const Prepared prep = prepare(points, g, options.standardize);
  auto labels = agglomerate(prep.space, k, linkage);
  return finish(Method::hac, g, k, std::move(labels), prep, 0, points.size() - k);
}

ClusteringResult hcpc(const PointSet& points, const Generator& g, std::size_t k,
                      std::uint64_t seed, const HcpcOptions& options) {
  const Prepared prep = prepare(points, g, options.standardize);
  require_k(k, prep.space.size(), "points");
  const auto n = static_cast<Eigen::Index>(prep.space.size());
  const auto d = static_cast<Eigen::Index>(prep.space.dim());
  const std::size_t components = options.n_components.value_or(prep.space.dim());
  if (components == 0 || components > prep.space.dim()) {
    throw InvalidArgument("n_components must lie in [1, dimension]");
  }
  const Eigen::Map<const RowMatrix> X(prep.space.coords().data(), n, d);
  const RowMatrix centered = X.rowwise() - X.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
  if (!(cov.trace() > 0.0)) throw InvalidArgument("data has zero variance");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw NumericalFailure("eigendecomposition failed");
  // Eigen sorts ascending; keep the trailing (largest) axes, largest first.
  Eigen::MatrixXd axes(d, static_cast<Eigen::Index>(components));
  for (std::size_t c = 0; c < components; ++c)
    axes.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(d - 1 - static_cast<Eigen::Index>(c));
  const RowMatrix scores = centered * axes;

  PointSet score_points(components, std::vector<double>(scores.data(), scores.data() + scores.size()));
  auto labels = agglomerate(score_points, k, Linkage::ward);
  std::size_t iterations = 0;
  if (options.consolidate) {
    std::vector<double> centers(k * components, 0.0);
    std::vector<std::size_t> counts(k);
    kernels::serial::cell_means(score_points.coords(), labels, components, k, centers, counts);
    LloydState st = lloyd_from(score_points, std::move(centers), {options.max_iters, 0.0, options.exec});
    labels = std::move(st.labels);
    iterations = st.iterations;
  }
  Prepared projected{prep.embedded, std::move(score_points)};
  return finish(Method::hcpc, g, k, std::move(labels), projected, seed, iterations);
}

}  // namespace rbgeo
