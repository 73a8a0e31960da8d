#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rbgeo/errors.hpp"
#include "rbgeo/evaluation.hpp"
#include "support.hpp"

using namespace rbgeo;

namespace {

double brute_force_accuracy(const std::vector<std::size_t>& a, const std::vector<int>& l,
                            std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      hit += perm[a[i]] == static_cast<std::size_t>(l[i]);
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / a.size();
}

// Rand index adjusted via explicit pair counting.
double pair_counting_ari(const std::vector<std::size_t>& a, const std::vector<int>& l) {
  const std::size_t n = a.size();
  double both = 0, in_a = 0, in_l = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j], sl = l[i] == l[j];
      both += sa && sl;
      in_a += sa;
      in_l += sl;
    }
  const double pairs = n * (n - 1) / 2.0;
  const double expected = in_a * in_l / pairs;
  const double max_index = 0.5 * (in_a + in_l);
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

}  // namespace

TEST_CASE("accuracy examples") {
  const std::vector<std::size_t> a = {0, 0, 1, 1};
  CHECK(accuracy(a, std::vector<int>{1, 1, 0, 0}, 2) == 1.0);
  CHECK(accuracy(a, std::vector<int>{0, 1, 0, 1}, 2) == 0.5);
  CHECK(accuracy(std::vector<std::size_t>{0, 0, 0}, std::vector<int>{0, 1, 2}, 3) ==
        doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(accuracy(a, std::vector<int>{0, 1}, 2), InvalidArgument);
  CHECK_THROWS_AS(accuracy(a, std::vector<int>{0, 1, 2, 0}, 2), InvalidArgument);
  CHECK_THROWS_AS(accuracy(a, std::vector<int>{0, -1, 0, 0}, 2), InvalidArgument);
}

TEST_CASE("contingency table and matching") {
  const std::vector<std::size_t> a = {0, 0, 1, 2, 2, 2};
  const std::vector<int> l = {1, 1, 0, 2, 2, 0};
  const auto t = contingency_table(a, l, 3);
  CHECK(t == std::vector<std::size_t>{0, 2, 0, 1, 0, 0, 1, 0, 2});
  CHECK(optimal_matching(t, 3) == std::vector<std::size_t>{1, 0, 2});
}

TEST_CASE("hungarian accuracy equals the brute-force optimum") {
  CounterRng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng.uniform_index(6);
    const std::size_t n = 1 + rng.uniform_index(60);
    std::vector<std::size_t> a(n);
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform_index(k);
      l[i] = static_cast<int>(rng.uniform_index(k));
    }
    const double acc = accuracy(a, l, k);
    CHECK(acc == brute_force_accuracy(a, l, k));
    // Relabelling the clusters leaves accuracy unchanged.
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::rotate(perm.begin(), perm.begin() + static_cast<long>(rng.uniform_index(k)), perm.end());
    std::vector<std::size_t> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = perm[a[i]];
    CHECK(accuracy(b, l, k) == acc);
  }
}

TEST_CASE("adjusted rand index") {
  const std::vector<std::size_t> a = {0, 0, 1, 1};
  CHECK(adjusted_rand_index(a, std::vector<int>{5, 5, 3, 3}) == 1.0);
  CHECK(adjusted_rand_index(std::vector<std::size_t>{0, 0, 0}, std::vector<int>{1, 1, 1}) ==
        1.0);
  CounterRng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(50);
    std::vector<std::size_t> x(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform_index(4);
      y[i] = static_cast<int>(rng.uniform_index(5));
    }
    CHECK(adjusted_rand_index(x, y) == doctest::Approx(pair_counting_ari(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("normalized mutual information") {
  const std::vector<std::size_t> a = {0, 0, 1, 1};
  CHECK(normalized_mutual_information(a, std::vector<int>{1, 1, 0, 0}) ==
        doctest::Approx(1.0));
  CHECK(normalized_mutual_information(a, std::vector<int>{0, 1, 0, 1}) ==
        doctest::Approx(0.0));
  CHECK(normalized_mutual_information(std::vector<std::size_t>{0, 0},
                                      std::vector<int>{3, 3}) == 1.0);
  CHECK(normalized_mutual_information(std::vector<std::size_t>{0, 0},
                                      std::vector<int>{0, 1}) == 0.0);
  CounterRng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> x(30);
    std::vector<int> y(30);
    for (std::size_t i = 0; i < 30; ++i) {
      x[i] = rng.uniform_index(3);
      y[i] = static_cast<int>(rng.uniform_index(3));
    }
    const double v = normalized_mutual_information(x, y);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }
}

TEST_CASE("synthetic dataset") {
  const SyntheticSpec spec = default_synthetic_spec(42);
  const PointSet d = generate_dataset(spec);
  REQUIRE(d.size() == 750);
  REQUIRE(d.has_labels());
  std::vector<std::size_t> counts(4, 0);
  std::vector<double> sx(4, 0.0), sy(4, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto c = static_cast<std::size_t>(d.labels()[i]);
    ++counts[c];
    sx[c] += d[i][0];
    sy[c] += d[i][1];
    CHECK(d[i][0] > 0.0);
    CHECK(d[i][1] > 0.0);
  }
  CHECK(counts == std::vector<std::size_t>{100, 300, 200, 150});
  for (std::size_t c = 0; c < 4; ++c) {
    const auto& cs = spec.clusters[c];
    const double n = static_cast<double>(cs.count);
    CHECK(std::abs(sx[c] / n - cs.mean[0]) < 3.0 * cs.sigma[0] / std::sqrt(n));
    CHECK(std::abs(sy[c] / n - cs.mean[1]) < 3.0 * cs.sigma[1] / std::sqrt(n));
  }
  CHECK(generate_dataset(spec).coords() == d.coords());
  CHECK(generate_dataset(default_synthetic_spec(43)).coords() != d.coords());
}

TEST_CASE("spec validation") {
  SyntheticSpec s = default_synthetic_spec();
  s.clusters[1].sigma[0] = -1.0;
  CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("clusters[1].sigma"), InvalidArgument);
  s = default_synthetic_spec();
  s.clusters[2].mean = {1.0};
  CHECK_THROWS_AS(validate(s), InvalidArgument);
  s = default_synthetic_spec();
  s.clusters.clear();
  CHECK_THROWS_AS(validate(s), InvalidArgument);
}

TEST_CASE("evaluate reorders sizes and centers by matched label") {
  ClusteringResult r;
  r.k = 2;
  r.generator = "euclidean";
  r.assignments = {1, 1, 1, 0};
  r.sizes = {1, 3};
  r.centers = PointSet(1, {10.0, 0.0});
  const std::vector<int> labels = {0, 0, 0, 1};
  const auto e = evaluate(r, labels);
  CHECK(e.accuracy == 1.0);
  CHECK(e.sizes == std::vector<std::size_t>{3, 1});
  CHECK(e.centers[0][0] == 0.0);
  CHECK(e.centers[1][0] == 10.0);
}

TEST_CASE("run_experiment ordering and determinism") {
  SyntheticSpec spec;
  spec.seed = 1;
  spec.clusters = {{{2.0, 2.0}, {0.2, 0.2}, 20}, {{5.0, 5.0}, {0.2, 0.2}, 20}};
  const std::vector<Method> methods = {Method::kmeans, Method::hac};
  const std::vector<std::string> gens = {"shannon", "burg"};
  const std::vector<std::uint64_t> seeds = {0, 1, 2};
  const auto a = run_experiment(spec, methods, gens, 2, seeds);
  REQUIRE(a.size() == 12);
  CHECK(a[0].method == Method::kmeans);
  CHECK(a[0].generator == "shannon");
  CHECK(a[2].seed == 2);
  CHECK(a[3].generator == "burg");
  CHECK(a[6].method == Method::hac);
  for (const auto& r : a) CHECK(r.accuracy == 1.0);
  const auto b = run_experiment(spec, methods, gens, 2, seeds);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].result.assignments == b[i].result.assignments);
  CHECK_THROWS_AS(run_experiment(spec, methods, std::vector<std::string>{"nope"}, 2, seeds),
                  InvalidArgument);
}

TEST_CASE("metric examples") {
  CHECK(accuracy(std::vector<std::size_t>{1, 1, 1, 0}, std::vector<int>{0, 0, 1, 1}, 2) == 0.75);
  const std::vector<std::size_t> singletons = {0, 1, 2, 3, 4};
  CHECK(adjusted_rand_index(singletons, std::vector<int>{0, 0, 0, 0, 0}) == 0.0);
  std::vector<std::size_t> a;
  std::vector<int> l;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 25; ++i) {
      a.push_back(static_cast<std::size_t>(c / 2));
      l.push_back(c % 2);
    }
  CHECK(normalized_mutual_information(a, l) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ARI and NMI are symmetric") {
  CounterRng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(40);
    std::vector<std::size_t> x(n), y(n);
    std::vector<int> xi(n), yi(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform_index(4);
      y[i] = rng.uniform_index(3);
      xi[i] = static_cast<int>(x[i]);
      yi[i] = static_cast<int>(y[i]);
    }
    CHECK(adjusted_rand_index(x, yi) == doctest::Approx(adjusted_rand_index(y, xi)).epsilon(1e-12));
    CHECK(normalized_mutual_information(x, yi) ==
          doctest::Approx(normalized_mutual_information(y, xi)).epsilon(1e-12));
  }
}

TEST_CASE("euclidean k-means centers lie inside the data bounding box") {
  const SyntheticSpec spec = default_synthetic_spec(3);
  const PointSet data = generate_dataset(spec);
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      lo[j] = std::min(lo[j], data[i][j]);
      hi[j] = std::max(hi[j], data[i][j]);
    }
  const std::vector<Method> m = {Method::kmeans};
  const std::vector<std::string> g = {"euclidean"};
  const std::vector<std::uint64_t> seeds = {4};
  const auto reports = run_experiment(spec, m, g, 4, seeds);
  REQUIRE(reports.size() == 1);
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(reports[0].centers[c][j] >= lo[j]);
      CHECK(reports[0].centers[c][j] <= hi[j]);
    }
}
