#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rbgeo/generator.hpp"
#include "rbgeo/kernels.hpp"
#include "rbgeo/point_set.hpp"

namespace rbgeo {

// Every method follows the same strategy: map the data through h, cluster the
// embedded points with the ordinary Euclidean procedure, then report
// assignments and Riemann-Bregman centroids (H of the embedded cluster means)
// in the original coordinates.

enum class Method { kmeans, em, hcpc, hac };
enum class Linkage { single, average, complete, ward };

std::string_view to_string(Method m);
std::string_view to_string(Linkage l);
Method parse_method(std::string_view name);
Linkage parse_linkage(std::string_view name);

struct ClusteringResult {
  Method method = Method::kmeans;
  std::string generator;
  std::size_t k = 0;
  std::vector<std::size_t> assignments;
  PointSet centers;  // k rows, original coordinates
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  // Within-cluster sum of squared distances in the space the method
  // partitioned (embedded, standardised and/or projected as configured).
  double objective = 0.0;
};

struct KMeansOptions {
  std::size_t max_iters = 200;
  double tol = 1e-8;
  // Independent k-means++ starts; the run with the lowest objective is kept.
  std::size_t restarts = 1;
  // z-score embedded coordinates before clustering.
  bool standardize = false;
  kernels::Execution exec = kernels::Execution::parallel;
};

ClusteringResult kmeans(const PointSet& points, const Generator& g, std::size_t k,
                        std::uint64_t seed, const KMeansOptions& options = {});

struct GaussianComponent {
  double weight = 0.0;
  std::vector<double> mean;        // clustering-space coordinates
  std::vector<double> covariance;  // dim x dim, row-major
};

struct GaussianMixtureModel {
  std::vector<GaussianComponent> components;
  // Per-iteration value of the objective EM ascends: the data log-likelihood
  // minus the ridge penalty (ridge / 2) * sum_k tr(Sigma_k^-1).
  std::vector<double> log_likelihood;
  // Fixed ridge: 1e-6 * trace(data covariance) / dim.
  double ridge = 0.0;
  bool converged = false;
};

struct EmOptions {
  std::size_t max_iters = 500;
  double tol = 1e-8;
  bool standardize = false;
  kernels::Execution exec = kernels::Execution::parallel;
};

// Full-covariance Gaussian mixture on the embedded points. Responsibilities
// start from a hard assignment to k-means++ seeds. Hard labels are the
// maximum-posterior components.
std::pair<ClusteringResult, GaussianMixtureModel> em_gmm(const PointSet& points,
                                                         const Generator& g, std::size_t k,
                                                         std::uint64_t seed,
                                                         const EmOptions& options = {});

struct HacOptions {
  bool standardize = false;
};

// Agglomerative clustering cut at k clusters; deterministic. Cluster ids are
// ordered by their lowest point index. Memory is O(n^2).
ClusteringResult hac(const PointSet& points, const Generator& g, std::size_t k,
                     Linkage linkage, const HacOptions& options = {});

struct HcpcOptions {
  // Number of principal axes kept; all when unset.
  std::optional<std::size_t> n_components;
  bool consolidate = true;
  bool standardize = false;
  std::size_t max_iters = 200;
  kernels::Execution exec = kernels::Execution::parallel;
};

// Ward HAC on principal-component scores of the centred embedded data,
// optionally consolidated by k-means started from the cut's cluster means.
ClusteringResult hcpc(const PointSet& points, const Generator& g, std::size_t k,
                      std::uint64_t seed, const HcpcOptions& options = {});

// Ward/single/average/complete agglomeration of a Euclidean point set cut at
// k clusters. Exposed for reuse and testing.
std::vector<std::size_t> agglomerate(const PointSet& points, std::size_t k, Linkage linkage);

}  // namespace rbgeo
