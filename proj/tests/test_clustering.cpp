#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "rbgeo/clustering.hpp"
#include "rbgeo/errors.hpp"
#include "rbgeo/evaluation.hpp"
#include "rbgeo/geometry.hpp"
#include "support.hpp"

using namespace rbgeo;

namespace {

// True when two labelings induce the same partition.
bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  std::map<std::size_t, std::size_t> fwd, bwd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [f, fi] = fwd.emplace(a[i], b[i]);
    auto [r, ri] = bwd.emplace(b[i], a[i]);
    if (f->second != b[i] || r->second != a[i]) return false;
  }
  return true;
}

PointSet blobs(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.clusters = {{{2.0, 2.0}, {0.2, 0.2}, 30},
                   {{6.0, 2.5}, {0.3, 0.2}, 25},
                   {{4.0, 7.0}, {0.25, 0.3}, 35}};
  return generate_dataset(spec);
}

}  // namespace

TEST_CASE("method and linkage names") {
  for (Method m : {Method::kmeans, Method::em, Method::hcpc, Method::hac})
    CHECK(parse_method(to_string(m)) == m);
  for (Linkage l : {Linkage::single, Linkage::average, Linkage::complete, Linkage::ward})
    CHECK(parse_linkage(to_string(l)) == l);
  CHECK_THROWS_AS(parse_method("dbscan"), InvalidArgument);
  CHECK_THROWS_AS(parse_linkage("centroid"), InvalidArgument);
}

TEST_CASE("k = 1 yields the centroid") {
  CounterRng rng(1);
  for (const auto& name : rbgeo::testing::all_generators()) {
    const Generator g = make_generator(name);
    const PointSet pts = rbgeo::testing::draw_points(rng, name, 25, 2);
    const Point c = centroid(g, pts);
    const auto km = kmeans(pts, g, 1, 0);
    const auto em = em_gmm(pts, g, 1, 0).first;
    const auto hc = hac(pts, g, 1, Linkage::ward);
    const auto hp = hcpc(pts, g, 1, 0);
    for (const auto* r : {&km, &em, &hc, &hp}) {
      CHECK(r->sizes == std::vector<std::size_t>{25});
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(rbgeo::testing::close_rel(r->centers[0][j], c[j], 1e-9));
    }
  }
}

TEST_CASE("argument validation") {
  const Generator sh = make_generator("shannon");
  const PointSet pts(1, {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(kmeans(pts, sh, 0, 0), InvalidArgument);
  CHECK_THROWS_AS(kmeans(pts, sh, 4, 0), InvalidArgument);
  CHECK_THROWS_AS(kmeans(PointSet(1, {1.0, 1.0, 2.0}), sh, 3, 0), InvalidArgument);
  CHECK_THROWS_AS(hac(pts, sh, 0, Linkage::ward), InvalidArgument);
  CHECK_THROWS_AS(em_gmm(pts, sh, 4, 0), InvalidArgument);
  CHECK_THROWS_AS(kmeans(PointSet(1, {1.0, -2.0}), sh, 1, 0), DomainError);
  CHECK_THROWS_AS(hcpc(PointSet(2, {1.0, 1.0, 1.0, 1.0}), sh, 1, 0), InvalidArgument);
}

TEST_CASE("euclidean generator is plain clustering") {
  const PointSet pts = blobs(3);
  const Generator eu = make_generator("euclidean");
  const auto r = kmeans(pts, eu, 3, 5);
  // Centers are the arithmetic cell means.
  for (std::size_t c = 0; c < 3; ++c) {
    double sx = 0, sy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (r.assignments[i] == c) {
        sx += pts[i][0];
        sy += pts[i][1];
        ++n;
      }
    CHECK(n == r.sizes[c]);
    CHECK(r.centers[c][0] == doctest::Approx(sx / n).epsilon(1e-12));
    CHECK(r.centers[c][1] == doctest::Approx(sy / n).epsilon(1e-12));
  }
  CHECK(accuracy(r.assignments, pts.labels(), 3) == 1.0);
}

TEST_CASE("clustering in original space equals euclidean clustering of embedded data") {
  const PointSet pts = blobs(4);
  const Generator eu = make_generator("euclidean");
  for (const char* name : {"shannon", "burg", "exp"}) {
    CAPTURE(name);
    const Generator g = make_generator(name);
    PointSet e = embed_points(g, pts);
    e.set_labels(pts.labels());
    CHECK(kmeans(pts, g, 3, 9).assignments == kmeans(e, eu, 3, 9).assignments);
    CHECK(em_gmm(pts, g, 3, 9).first.assignments == em_gmm(e, eu, 3, 9).first.assignments);
    CHECK(hac(pts, g, 3, Linkage::ward).assignments ==
          hac(e, eu, 3, Linkage::ward).assignments);
    CHECK(hcpc(pts, g, 3, 9).assignments == hcpc(e, eu, 3, 9).assignments);
  }
}

TEST_CASE("agglomerate") {
  SUBCASE("single linkage on a line") {
    const PointSet pts(1, {0.0, 1.0, 5.0, 5.5});
    CHECK(agglomerate(pts, 2, Linkage::single) == std::vector<std::size_t>{0, 0, 1, 1});
    CHECK(agglomerate(pts, 3, Linkage::single) == std::vector<std::size_t>{0, 1, 2, 2});
    CHECK(agglomerate(pts, 1, Linkage::single) == std::vector<std::size_t>{0, 0, 0, 0});
  }
  SUBCASE("chaining separates single from complete linkage") {
    const PointSet pts(1, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0});
    // single linkage keeps the evenly spaced chain together until the end
    CHECK(agglomerate(pts, 2, Linkage::single) ==
          std::vector<std::size_t>{0, 0, 0, 0, 0, 0, 0, 0, 0, 1});
    CHECK(agglomerate(pts, 2, Linkage::complete) != agglomerate(pts, 2, Linkage::single));
  }
  SUBCASE("k = n gives singletons in index order") {
    CounterRng rng(2);
    const PointSet pts = rbgeo::testing::draw_points(rng, "euclidean", 9, 2);
    for (Linkage l : {Linkage::single, Linkage::average, Linkage::complete, Linkage::ward}) {
      const auto labels = agglomerate(pts, 9, l);
      for (std::size_t i = 0; i < 9; ++i) CHECK(labels[i] == i);
    }
  }
  SUBCASE("well separated blobs are recovered by every linkage") {
    const PointSet pts = blobs(6);
    for (Linkage l : {Linkage::single, Linkage::average, Linkage::complete, Linkage::ward})
      CHECK(accuracy(agglomerate(pts, 3, l), pts.labels(), 3) == 1.0);
  }
  SUBCASE("ward merge cost oracle") {
    // Ward merges the pair with minimal increase n_a n_b / (n_a + n_b) |m_a - m_b|^2.
    // For {0, 2, 3, 10}: first {2,3}, then {0} with {2,3} (cost 2/3*2.5^2=4.17)
    // rather than {10} with {2,3} (2/3*7.5^2).
    const PointSet pts(1, {0.0, 2.0, 3.0, 10.0});
    CHECK(agglomerate(pts, 3, Linkage::ward) == std::vector<std::size_t>{0, 1, 1, 2});
    CHECK(agglomerate(pts, 2, Linkage::ward) == std::vector<std::size_t>{0, 0, 0, 1});
  }
}

TEST_CASE("hac reports the lowest-index ordering and consistent sizes") {
  const PointSet pts = blobs(7);
  const auto r = hac(pts, make_generator("shannon"), 3, Linkage::average);
  CHECK(r.assignments[0] == 0);
  std::size_t next = 0;
  for (std::size_t a : r.assignments) {
    CHECK(a <= next);
    if (a == next) ++next;
  }
  std::size_t total = 0;
  for (auto s : r.sizes) total += s;
  CHECK(total == pts.size());
}

TEST_CASE("hcpc") {
  const PointSet pts = blobs(8);
  const Generator sh = make_generator("shannon");
  SUBCASE("without consolidation on all axes it is ward hac") {
    HcpcOptions o;
    o.consolidate = false;
    CHECK(same_partition(hcpc(pts, sh, 3, 0, o).assignments,
                         hac(pts, sh, 3, Linkage::ward).assignments));
  }
  SUBCASE("consolidation does not increase the within-cluster sum of squares") {
    CounterRng rng(19);
    for (int t = 0; t < 10; ++t) {
      const PointSet p = rbgeo::testing::draw_points(rng, "shannon", 60, 3);
      HcpcOptions raw;
      raw.consolidate = false;
      const auto a = hcpc(p, sh, 4, 0, raw);
      const auto b = hcpc(p, sh, 4, 0);
      CHECK(b.objective <= a.objective * (1 + 1e-12));
    }
  }
  SUBCASE("fewer components than the dimension") {
    HcpcOptions o;
    o.n_components = 1;
    const auto r = hcpc(pts, sh, 3, 0, o);
    CHECK(r.assignments.size() == pts.size());
    o.n_components = 3;
    CHECK_THROWS_AS(hcpc(pts, sh, 3, 0, o), InvalidArgument);
  }
}

TEST_CASE("em log-likelihood is non-decreasing") {
  CounterRng rng(23);
  for (int t = 0; t < 20; ++t) {
    const auto& name = rbgeo::testing::all_generators()[t % 5];
    CAPTURE(name);
    const PointSet p = rbgeo::testing::draw_points(rng, name, 40 + rng.uniform_index(80), 2);
    const auto [r, model] = em_gmm(p, make_generator(name), 1 + rng.uniform_index(4), t);
    const auto& ll = model.log_likelihood;
    REQUIRE(!ll.empty());
    for (std::size_t i = 1; i < ll.size(); ++i)
      CHECK(ll[i] >= ll[i - 1] - 1e-9 * std::abs(ll[i - 1]));
    double w = 0.0;
    for (const auto& c : model.components) w += c.weight;
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.ridge > 0.0);
  }
}

TEST_CASE("em separates well separated blobs") {
  const PointSet pts = blobs(9);
  const auto [r, model] = em_gmm(pts, make_generator("burg"), 3, 1);
  CHECK(accuracy(r.assignments, pts.labels(), 3) == 1.0);
  CHECK(model.converged);
}

TEST_CASE("permutation equivariance") {
  const PointSet pts = blobs(10);
  const std::size_t n = pts.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = (i * 37 + 11) % n;  // 37 is coprime to 90
  PointSet shuffled(2);
  for (std::size_t i = 0; i < n; ++i) shuffled.push_back(pts[perm[i]]);
  const Generator g = make_generator("shannon");

  auto unpermute = [&](const std::vector<std::size_t>& lab) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[perm[i]] = lab[i];
    return out;
  };
  for (Linkage l : {Linkage::single, Linkage::average, Linkage::complete, Linkage::ward})
    CHECK(same_partition(hac(pts, g, 3, l).assignments,
                         unpermute(hac(shuffled, g, 3, l).assignments)));
  // Seeding depends on row order, but clear blobs give the same partition.
  CHECK(same_partition(kmeans(pts, g, 3, 2).assignments,
                       unpermute(kmeans(shuffled, g, 3, 2).assignments)));
}

TEST_CASE("assignment uses the Riemann distance, not the left divergence") {
  // 1-D shannon with centers 1 and 9: at x = 3.9 the Riemann distance prefers 1
  // (|2sqrt(3.9) - 2| < |6 - 2sqrt(3.9)|) while delta(x, c) prefers 9.
  const Generator sh = make_generator("shannon");
  const double x = 3.9;
  CHECK(distance(sh, Point{x}, Point{1.0}) < distance(sh, Point{x}, Point{9.0}));
  CHECK(bregman_divergence(sh, Point{x}, Point{9.0}) <
        bregman_divergence(sh, Point{x}, Point{1.0}));
  // k-means started at 1 and 9 keeps x with the center at 1.
  const PointSet pts(1, {1.0, x, 9.0});
  const auto r = kmeans(pts, sh, 2, 0);
  CHECK(r.assignments[1] == r.assignments[0]);
}

TEST_CASE("standardize option") {
  const PointSet pts = blobs(11);
  KMeansOptions o;
  o.standardize = true;
  const auto r = kmeans(pts, make_generator("burg"), 3, 4, o);
  CHECK(accuracy(r.assignments, pts.labels(), 3) == 1.0);
}

TEST_CASE("em covariances are symmetric positive definite") {
  const PointSet pts = blobs(12);
  const auto model = em_gmm(pts, make_generator("shannon"), 3, 2).second;
  for (const auto& c : model.components) {
    REQUIRE(c.covariance.size() == 4);
    const double a = c.covariance[0], b = c.covariance[1], d = c.covariance[3];
    CHECK(b == c.covariance[2]);
    // Smallest eigenvalue of [[a, b], [b, d]] stays above the ridge scale.
    const double lmin = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    CHECK(lmin > 0.0);
  }
}

TEST_CASE("centers are the unembedded embedded means") {
  const PointSet pts = blobs(13);
  const Generator eu = make_generator("euclidean");
  for (const char* name : {"shannon", "burg", "exp"}) {
    const Generator g = make_generator(name);
    const auto a = kmeans(pts, g, 3, 1);
    const auto b = kmeans(embed_points(g, pts), eu, 3, 1);
    REQUIRE(a.assignments == b.assignments);
    for (std::size_t c = 0; c < 3; ++c) {
      const Point back = embed(g, a.centers[c]);
      for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(back[j] - b.centers[c][j]) < 1e-10);
    }
  }
}

TEST_CASE("hcpc without consolidation is permutation equivariant") {
  CounterRng rng(14);
  const PointSet pts = rbgeo::testing::draw_points(rng, "burg", 50, 2);
  std::vector<std::size_t> perm(50);
  for (std::size_t i = 0; i < 50; ++i) perm[i] = (i * 13 + 5) % 50;
  PointSet shuffled(2);
  for (std::size_t i = 0; i < 50; ++i) shuffled.push_back(pts[perm[i]]);
  HcpcOptions o;
  o.consolidate = false;
  const Generator g = make_generator("burg");
  const auto a = hcpc(pts, g, 4, 0, o).assignments;
  const auto b = hcpc(shuffled, g, 4, 0, o).assignments;
  std::vector<std::size_t> back(50);
  for (std::size_t i = 0; i < 50; ++i) back[perm[i]] = b[i];
  CHECK(same_partition(a, back));
}
