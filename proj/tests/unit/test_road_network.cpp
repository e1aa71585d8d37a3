#include <doctest.h>

#include <cmath>
#include <sstream>

#include "colocq/error.hpp"
#include "colocq/road_network.hpp"
#include "fixtures.hpp"
#include "naive.hpp"

using namespace colocq;

namespace {

RoadNetwork l_network() {
  return RoadNetwork({{1, 0, 0}, {2, 3, 0}, {3, 3, 4}}, {{1, 2, {}}, {2, 3, {}}});
}

}  // namespace

TEST_SUITE("road_network") {

TEST_CASE("two segments form one component") {
  auto net = l_network();
  CHECK(net.nodes().size() == 3);
  REQUIRE(net.edges().size() == 2);
  CHECK(net.edges()[0].length == 3.0);
  CHECK(net.edges()[1].length == 4.0);
  CHECK(net.component_count() == 1);
  CHECK(net.incident(1).size() == 2);
}

TEST_CASE("disjoint segments form two components") {
  RoadNetwork net({{1, 0, 0}, {2, 1, 0}, {3, 5, 5}, {4, 6, 5}}, {{1, 2, {}}, {3, 4, {}}});
  CHECK(net.component_count() == 2);
  CHECK(net.component_of(0) == net.component_of(1));
  CHECK(net.component_of(0) != net.component_of(2));
}

TEST_CASE("geojson linestring with three vertices gives two edges") {
  std::istringstream in(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {}, "geometry": {"type": "LineString", "coordinates": [[0,0],[3,0],[3,4]]}}]})");
  auto net = load_network_geojson(in);
  CHECK(net.nodes().size() == 3);
  CHECK(net.edges().size() == 2);
}

TEST_CASE("geojson features share nodes at equal coordinates") {
  auto net = load_network(COLOCQ_TEST_DATA "/l_network.geojson");
  CHECK(net.nodes().size() == 3);
  CHECK(net.component_count() == 1);
}

TEST_CASE("length property is spread over segments") {
  std::istringstream in(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {"length": 14}, "geometry": {"type": "LineString", "coordinates": [[0,0],[3,0],[3,4]]}}]})");
  auto net = load_network_geojson(in);
  CHECK(net.edges()[0].length == doctest::Approx(6.0));
  CHECK(net.edges()[1].length == doctest::Approx(8.0));
  CHECK_FALSE(net.warnings().empty());
}

TEST_CASE("edge csv with node table") {
  auto net = load_network(COLOCQ_TEST_DATA "/l_edges.csv", std::filesystem::path(COLOCQ_TEST_DATA "/l_nodes.csv"));
  REQUIRE(net.edges().size() == 2);
  CHECK(net.edges()[0].length == 3.0);
  CHECK(net.edges()[1].length == 4.0);
  CHECK(*net.node_index(12) == 2);
}

TEST_CASE("rejections") {
  CHECK_THROWS_AS(RoadNetwork({{1, 0, 0}, {2, 0, 0}}, {{1, 2, {}}}), InputError);
  CHECK_THROWS_AS(RoadNetwork({{1, 0, 0}, {2, 1, 0}}, {{1, 3, {}}}), InputError);
  CHECK_THROWS_AS(RoadNetwork({{1, 0, 0}, {2, 1, 0}}, {{1, 1, {}}}), InputError);
  CHECK_THROWS_AS(RoadNetwork({{1, 0, 0}, {2, 1, 0}}, {{1, 2, 0.0}}), InputError);
  CHECK_THROWS_AS(RoadNetwork({{1, 0, 0}, {1, 1, 0}}, {{1, 1, {}}}), InputError);
}

TEST_CASE("snap examples") {
  auto net = l_network();
  auto s = snap_location(1, 1, net);
  CHECK(s.edge == 0);
  CHECK(s.offset == doctest::Approx(1.0));
  CHECK(s.snap_distance == doctest::Approx(1.0));

  s = snap_location(1.5, 0, net);
  CHECK(s.snap_distance == 0.0);

  RoadNetwork single({{1, 0, 0}, {2, 3, 0}}, {{1, 2, {}}});
  s = snap_location(5, 1, single);
  CHECK(s.offset == doctest::Approx(3.0));
  CHECK(s.snap_distance == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("grid snapping agrees with brute force") {
  auto net = fixtures::grid_network(9, 7, 50.0, 10.0, -20.0, 0.3, 4);
  auto pts = fixtures::csr({"A", "B"}, {300, 200}, 8, 500.0);
  std::vector<std::string> warnings;
  auto snapped = snap_points(pts, *net, 30.0, &warnings);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto ref = naive::snap(pts[i].x, pts[i].y, *net);
    CHECK(snapped[i].snap_distance == doctest::Approx(ref.distance).epsilon(1e-12));
    CHECK(snapped[i].point_id == pts[i].id);
  }
  CHECK_FALSE(warnings.empty());
}

}
