#include <doctest.h>

#include <sstream>

#include "colocq/error.hpp"
#include "colocq/point_data.hpp"
#include "fixtures.hpp"

using namespace colocq;

namespace {

PointSet parse(const std::string& text, std::string_view field = "category") {
  std::istringstream in(text);
  return load_points_csv(in, field, "test.csv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("point_data") {

TEST_CASE("three rows give counts per category") {
  auto pts = parse("id,x,y,category\n0,0,0,A\n1,1,0,A\n2,5,5,B\n");
  CHECK(pts.size() == 3);
  CHECK(pts.count("A") == 2);
  CHECK(pts.count("B") == 1);
  CHECK(pts.count("C") == 0);
  CHECK(pts.categories() == std::vector<std::string>{"A", "B"});
  CHECK(pts.indices_of("A") == std::vector<std::size_t>{0, 1});
  CHECK(*pts.index_of(2) == 2);
  CHECK_FALSE(pts.index_of(9).has_value());
}

TEST_CASE("malformed coordinate names the row and field") {
  auto msg = error_of("id,x,y,category\n0,0,0,A\n1,abc,0,B\n");
  CHECK(msg.find("row 2") != std::string::npos);
  CHECK(msg.find("x") != std::string::npos);
  CHECK(msg.find("abc") != std::string::npos);
}

TEST_CASE("coincident points are retained") {
  auto pts = parse("id,x,y,category\n1,2,2,A\n2,2,2,B\n");
  CHECK(pts.size() == 2);
  CHECK(pts[0].x == pts[1].x);
}

TEST_CASE("rejections") {
  CHECK(error_of("id,x,y,category\n") .find("no data rows") != std::string::npos);
  CHECK_FALSE(error_of("id,x,y\n0,0,0\n").empty());
  CHECK_FALSE(error_of("id,x,y,category\n0,0,0,\n").empty());
  CHECK_FALSE(error_of("id,x,y,category\n0,0,0,A\n0,1,1,B\n").empty());
  CHECK_FALSE(error_of("id,x,y,category\n0,nan,0,A\n").empty());
  CHECK_FALSE(error_of("id,x,y,category\n0,0,0\n").empty());
  CHECK_THROWS_AS(PointSet(std::vector<SpatialPoint>{}), InputError);
}

TEST_CASE("optional id column, custom field, quoting") {
  auto pts = parse("x,y,kind\n0,0,\"corner, shop\"\n1,0,bar\n", "kind");
  CHECK(pts[0].id == 0);
  CHECK(pts[1].id == 1);
  CHECK(pts[0].category == "corner, shop");
}

TEST_CASE("csv write then read keeps every point") {
  auto pts = fixtures::csr({"A", "B", "C"}, {20, 15, 5}, 11);
  std::stringstream buf;
  write_points_csv(buf, pts);
  auto back = load_points_csv(buf);
  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i].id == pts[i].id);
    CHECK(back[i].x == pts[i].x);
    CHECK(back[i].y == pts[i].y);
    CHECK(back[i].category == pts[i].category);
  }
}

TEST_CASE("geojson points") {
  auto pts = load_points(COLOCQ_TEST_DATA "/shops.geojson", "kind");
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].id == 7);
  CHECK(pts[1].id == 8);
  CHECK(pts[2].id == 2);
  CHECK(pts.count("bar") == 2);
  CHECK(pts[1].y == 2.0);

  std::istringstream bad(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {"category": "A"}, "geometry": {"type": "LineString", "coordinates": [[0,0],[1,1]]}}]})");
  CHECK_THROWS_AS(load_points_geojson(bad), InputError);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_points("/nonexistent/points.csv"), InputError);
}

}
