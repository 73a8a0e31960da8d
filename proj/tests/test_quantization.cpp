#include <doctest.h>

#include <cmath>

#include "rbgeo/errors.hpp"
#include "rbgeo/geometry.hpp"
#include "rbgeo/quantization.hpp"
#include "support.hpp"

using namespace rbgeo;

TEST_CASE("quantize and distortion examples") {
  const Codebook burg(make_generator("burg"), PointSet(1, {1.0, std::exp(4.0)}));
  CHECK(quantize(burg, Point{std::exp(2.0)}) == 0);  // equidistant
  CHECK(quantize(burg, Point{std::exp(2.1)}) == 1);
  CHECK(quantize(burg, Point{3.0}) == 0);

  const Codebook eu(make_generator("euclidean"), PointSet(1, {0.0}));
  CHECK(distortion(eu, PointSet(1, {-1.0, 1.0})) == 1.0);

  const Codebook sh(make_generator("shannon"), PointSet(1, {4.0}));
  // (2*sqrt(1) - 2*sqrt(4))^2 = 4 and (2*sqrt(9) - 2*sqrt(4))^2 = 4.
  CHECK(distortion(sh, PointSet(1, {1.0, 9.0})) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("codebook validation") {
  const Generator sh = make_generator("shannon");
  CHECK_THROWS_AS(Codebook(sh, PointSet(1)), InvalidArgument);
  CHECK_THROWS_AS(Codebook(sh, PointSet(1, {1.0, 1.0})), InvalidArgument);
  CHECK_THROWS_AS(Codebook(sh, PointSet(1, {1.0, -1.0})), DomainError);
  const Codebook cb(sh, PointSet(2, {1.0, 1.0}));
  CHECK(cb.rate() == 1);
  CHECK_THROWS_AS(quantize(cb, Point{1.0}), InvalidArgument);
  CHECK_THROWS_AS(distortion(cb, PointSet(2)), InvalidArgument);
}

TEST_CASE("distortion matches the naive definition") {
  CounterRng rng(5);
  for (const auto& name : rbgeo::testing::all_generators()) {
    const Generator g = make_generator(name);
    const PointSet codes = rbgeo::testing::draw_points(rng, name, 5, 3);
    const PointSet samples = rbgeo::testing::draw_points(rng, name, 80, 3);
    const Codebook cb(g, codes);
    double sum = 0.0;
    for (std::size_t n = 0; n < samples.size(); ++n) {
      double best = kInf;
      for (std::size_t i = 0; i < codes.size(); ++i)
        best = std::min(best, squared_distance(g, samples[n], codes[i]));
      sum += best;
    }
    CHECK(rbgeo::testing::close_rel(distortion(cb, samples), sum / samples.size(), 1e-12));
  }
}

TEST_CASE("lloyd edge cases") {
  const Generator sh = make_generator("shannon");
  SUBCASE("rate equal to the number of samples") {
    const PointSet s(1, {1.0, 2.0, 5.0, 7.5});
    const auto r = lloyd(sh, s, 4, 3);
    CHECK(r.distortion == 0.0);
    CHECK(r.converged);
  }
  SUBCASE("single code is the centroid") {
    const auto r = lloyd(sh, PointSet(1, {1.0, 9.0, 1.0, 9.0}), 1, 0);
    CHECK(r.codebook.codes()[0][0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(r.distortion == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(lloyd(sh, PointSet(1, {1.0, 2.0}), 0, 0), InvalidArgument);
    CHECK_THROWS_AS(lloyd(sh, PointSet(1, {1.0, 1.0, 2.0}), 3, 0), InvalidArgument);
    CHECK_THROWS_AS(lloyd(sh, PointSet(1, {1.0, 0.0}), 1, 0), DomainError);
  }
  SUBCASE("same seed, same codebook") {
    CounterRng rng(9);
    const PointSet s = rbgeo::testing::draw_points(rng, "shannon", 100, 2);
    const auto a = lloyd(sh, s, 5, 77);
    const auto b = lloyd(sh, s, 5, 77);
    CHECK(a.codebook.codes().coords() == b.codebook.codes().coords());
    CHECK(a.assignments == b.assignments);
  }
}

TEST_CASE("lloyd trace is non-increasing and converged codebooks are self-consistent") {
  CounterRng rng(31);
  LloydOptions exact;
  exact.tol = 0.0;
  exact.max_iters = 1000;
  for (int run = 0; run < 40; ++run) {
    const auto& name = rbgeo::testing::all_generators()[run % 5];
    CAPTURE(name);
    const Generator g = make_generator(name);
    const PointSet s = rbgeo::testing::draw_points(rng, name, 30 + rng.uniform_index(100), 2);
    const std::size_t rate = 1 + rng.uniform_index(8);
    const auto r = lloyd(g, s, rate, run, exact);
    for (std::size_t i = 1; i < r.distortion_trace.size(); ++i)
      CHECK(r.distortion_trace[i] <= r.distortion_trace[i - 1]);
    REQUIRE(r.converged);
    for (std::size_t c = 0; c < rate; ++c) {
      PointSet cell(2);
      for (std::size_t n = 0; n < s.size(); ++n)
        if (r.assignments[n] == c) cell.push_back(s[n]);
      REQUIRE(!cell.empty());
      const Point m = centroid(g, cell);
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(rbgeo::testing::close_rel(m[j], r.codebook.codes()[c][j], 1e-9));
    }
    // Every sample sits in its nearest cell.
    for (std::size_t n = 0; n < s.size(); ++n)
      CHECK(quantize(r.codebook, s[n]) == r.assignments[n]);
  }
}

TEST_CASE("lloyd equals euclidean lloyd on embedded samples") {
  CounterRng rng(44);
  const Generator burg = make_generator("burg");
  const Generator eu = make_generator("euclidean");
  const PointSet s = rbgeo::testing::draw_points(rng, "burg", 150, 2);
  const PointSet e = embed_points(burg, s);
  const auto a = lloyd(burg, s, 4, 8);
  const auto b = lloyd(eu, e, 4, 8);
  CHECK(a.assignments == b.assignments);
  CHECK(a.distortion == doctest::Approx(b.distortion).epsilon(1e-12));
  for (std::size_t c = 0; c < 4; ++c) {
    const Point back = embed(burg, a.codebook.codes()[c]);
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(back[j] == doctest::Approx(b.codebook.codes()[c][j]).epsilon(1e-12));
  }
}

TEST_CASE("serial and parallel lloyd agree") {
  CounterRng rng(45);
  const Generator g = make_generator("exp");
  const PointSet s = rbgeo::testing::draw_points(rng, "exp", 500, 3);
  LloydOptions ser, par;
  ser.exec = kernels::Execution::serial;
  par.exec = kernels::Execution::parallel;
  const auto a = lloyd(g, s, 6, 1, ser);
  const auto b = lloyd(g, s, 6, 1, par);
  CHECK(a.assignments == b.assignments);
  CHECK(a.codebook.codes().coords() == b.codebook.codes().coords());
}

TEST_CASE("empty cell repair") {
  const PointSet pts(1, {0.0, 1.0, 10.0});
  SUBCASE("no empty cells") {
    std::vector<double> centers = {0.5, 10.0};
    std::vector<std::size_t> labels = {0, 0, 1};
    std::vector<double> sq = {0.25, 0.25, 0.0};
    CHECK(empty_cell_repair(pts, centers, labels, sq) == 0);
    CHECK(centers == std::vector<double>{0.5, 10.0});
  }
  SUBCASE("one empty cell takes the farthest sample") {
    std::vector<double> centers = {3.0, 100.0};
    std::vector<std::size_t> labels = {0, 0, 0};
    std::vector<double> sq = {9.0, 4.0, 49.0};
    CHECK(empty_cell_repair(pts, centers, labels, sq) == 1);
    CHECK(centers[1] == 10.0);
    CHECK(labels[2] == 1);
    CHECK(sq[2] == 0.0);
  }
  SUBCASE("two empty cells take distinct samples") {
    std::vector<double> centers = {3.0, 100.0, 200.0};
    std::vector<std::size_t> labels = {0, 0, 0};
    std::vector<double> sq = {9.0, 4.0, 49.0};
    CHECK(empty_cell_repair(pts, centers, labels, sq) == 2);
    CHECK(centers[1] == 10.0);
    CHECK(centers[2] == 0.0);
    CHECK(labels == std::vector<std::size_t>{2, 0, 1});
  }
}

TEST_CASE("k-means++ picks distinct rows") {
  CounterRng data(3);
  const PointSet e = rbgeo::testing::draw_points(data, "euclidean", 40, 2);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CounterRng rng(seed);
    auto idx = kmeanspp_indices(e, 10, rng);
    CHECK(idx.size() == 10);
    std::sort(idx.begin(), idx.end());
    CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  }
}

TEST_CASE("quantize maps codes to themselves") {
  const Codebook burg(make_generator("burg"), PointSet(1, {1.0, std::exp(4.0)}));
  CHECK(quantize(burg, Point{std::exp(1.0)}) == 0);
  CHECK(quantize(burg, Point{std::exp(3.0)}) == 1);
  CounterRng rng(50);
  const Generator sh = make_generator("shannon");
  const Codebook cb(sh, rbgeo::testing::draw_points(rng, "shannon", 12, 2));
  for (std::size_t i = 0; i < cb.rate(); ++i) CHECK(quantize(cb, cb.codes()[i]) == i);
  CHECK(distortion(cb, cb.codes()) == 0.0);
}
