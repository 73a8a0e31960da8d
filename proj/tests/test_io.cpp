#include <doctest.h>

#include <sstream>

#include "rbgeo/io.hpp"

using namespace rbgeo;
using rbgeo::io::FormatError;

TEST_CASE("csv round trip") {
  PointSet p(2, {1.5, 2.0, 3.25, 0.125}, {0, 1});
  std::stringstream ss;
  io::write_points_csv(ss, p);
  CHECK(ss.str().rfind("x1,x2,label\n", 0) == 0);
  const PointSet q = io::read_points_csv(ss);
  CHECK(q.coords() == p.coords());
  CHECK(q.labels() == p.labels());
}

TEST_CASE("csv without labels and with extra whitespace") {
  std::istringstream in("a,b\n 1, 2\n3,4\n\n");
  const PointSet q = io::read_points_csv(in);
  CHECK(q.size() == 2);
  CHECK(q.dim() == 2);
  CHECK(!q.has_labels());
  CHECK(q[1][0] == 3.0);
}

TEST_CASE("csv errors name the location") {
  std::istringstream bad_num("x,y\n1,2\n1,abc\n");
  CHECK_THROWS_WITH_AS(io::read_points_csv(bad_num), doctest::Contains("line 3"), FormatError);
  std::istringstream ragged("x,y\n1,2,3\n");
  CHECK_THROWS_AS(io::read_points_csv(ragged), FormatError);
  std::istringstream bad_label("x,label\n1,0.5\n");
  CHECK_THROWS_AS(io::read_points_csv(bad_label), FormatError);
  std::istringstream empty("");
  CHECK_THROWS_AS(io::read_points_csv(empty), FormatError);
  CHECK_THROWS_AS(io::read_points_csv_file("/nonexistent/file.csv"), Error);
}

TEST_CASE("spec json") {
  const auto spec = default_synthetic_spec(5);
  const auto back = io::parse_spec(io::to_json(spec));
  CHECK(back.seed == 5);
  REQUIRE(back.clusters.size() == 4);
  CHECK(back.clusters[1].mean == spec.clusters[1].mean);
  CHECK(back.clusters[3].count == 150);
  CHECK_THROWS_AS(io::parse_spec(io::json::parse(R"({"clusters": 3})")), Error);
  CHECK_THROWS_AS(
      io::parse_spec(io::json::parse(R"({"clusters": [{"mean": [1], "sigma": [0], "count": 3}]})")),
      Error);
}

TEST_CASE("pgm header and payload") {
  const SiteSet sites(make_generator("shannon"), PointSet(2, {1, 1, 3, 3}));
  const auto r = rasterize(sites, Flavor::riemann, {0.5, 4.0, 0.5, 4.0}, 8, 4);
  std::ostringstream out;
  io::write_pgm(out, r);
  const std::string s = out.str();
  CHECK(s.rfind("P5\n8 4\n255\n", 0) == 0);
  CHECK(s.size() == std::string("P5\n8 4\n255\n").size() + 32);
}

TEST_CASE("svg writers emit well-formed documents") {
  const SiteSet sites(make_generator("burg"), PointSet(2, {1, 1, 3, 3}));
  const BoundingBox box{0.5, 4.0, 0.5, 4.0};
  std::ostringstream a, b;
  io::write_raster_svg(a, rasterize(sites, Flavor::left, box, 16, 16), &sites.sites());
  io::write_cells_svg(b, exact_riemann_cells(sites, box), sites, box);
  for (const auto& s : {a.str(), b.str()}) {
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
  }
}
