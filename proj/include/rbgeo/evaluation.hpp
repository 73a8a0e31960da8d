#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbgeo/clustering.hpp"
#include "rbgeo/point_set.hpp"

namespace rbgeo {

struct ClusterSpec {
  std::vector<double> mean;
  std::vector<double> sigma;  // per-coordinate standard deviation
  std::size_t count = 0;
};

struct SyntheticSpec {
  std::vector<ClusterSpec> clusters;
  std::uint64_t seed = 0;
};

// Four bivariate normal clouds with independent coordinates and sizes
// 100, 300, 200, 150:
//   mu = (8, 6.5) (9, 7.5) (8.5, 9) (8, 10)
//   sigma = (0.5, 0.5) (0.4, 0.45) (0.35, 0.35) (0.6, 0.6)
SyntheticSpec default_synthetic_spec(std::uint64_t seed = 0);

// Throws InvalidArgument naming the offending field.
void validate(const SyntheticSpec& spec);

// Labelled points, cluster by cluster. A draw with any coordinate <= 0 is
// rejected and redrawn so the data fits the (0, inf) domains.
PointSet generate_dataset(const SyntheticSpec& spec);

// k x k table: contingency[a * k + l] = #{n : assignment_n = a, label_n = l}.
std::vector<std::size_t> contingency_table(std::span<const std::size_t> assignments,
                                           std::span<const int> labels, std::size_t k);

// Maximum-weight perfect matching on a square k x k table (Hungarian method).
// Returns the label matched to each cluster.
std::vector<std::size_t> optimal_matching(std::span<const std::size_t> table, std::size_t k);

// Fraction of points correctly classified under the best cluster-to-label
// bijection. Assignments and labels must lie in [0, k).
double accuracy(std::span<const std::size_t> assignments, std::span<const int> labels,
                std::size_t k);

double adjusted_rand_index(std::span<const std::size_t> assignments,
                           std::span<const int> labels);

// I(A; L) / sqrt(H(A) H(L)); 1 when both partitions have a single block.
double normalized_mutual_information(std::span<const std::size_t> assignments,
                                     std::span<const int> labels);

struct EvaluationReport {
  Method method = Method::kmeans;
  std::string generator;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double adjusted_rand_index = 0.0;
  double normalized_mutual_information = 0.0;
  // Cluster sizes and centers reordered so that entry l belongs to the
  // cluster matched with groundtruth label l.
  std::vector<std::size_t> sizes;
  PointSet centers;
  ClusteringResult result;
};

struct ExperimentOptions {
  Linkage linkage = Linkage::ward;
  bool consolidate = true;
  bool standardize = false;
  std::optional<std::size_t> n_components;
  std::size_t restarts = 1;  // k-means only
};

EvaluationReport evaluate(const ClusteringResult& result, std::span<const int> labels);

// Runs one clustering method on labelled data and scores it.
EvaluationReport run_cell(const PointSet& data, Method method, const Generator& g,
                          std::size_t k, std::uint64_t seed,
                          const ExperimentOptions& options = {});

// Every (method, generator, seed) combination on the dataset generated from
// spec. Reports are ordered method-major, then generator, then seed. Cells
// run in parallel; deterministic methods (hac, hcpc) are computed once per
// generator and shared across seeds.
std::vector<EvaluationReport> run_experiment(const SyntheticSpec& spec,
                                             std::span<const Method> methods,
                                             std::span<const std::string> generators,
                                             std::size_t k,
                                             std::span<const std::uint64_t> seeds,
                                             const ExperimentOptions& options = {});

}  // namespace rbgeo
