#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colocq/point_data.hpp"

namespace colocq {

using NodeId = std::int64_t;

struct NetworkNode {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
};

// Undirected edge between node indices `a` and `b`.
struct NetworkEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double length = 0.0;
};

// Edge as given by a source, referencing node ids. A missing length means
// the chord length between the endpoint coordinates.
struct EdgeSpec {
  NodeId from = 0;
  NodeId to = 0;
  std::optional<double> length;
};

struct Incidence {
  std::size_t edge;
  std::size_t neighbor;
};

struct NetworkSummary {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t components = 0;
};

// Immutable undirected street graph.
//
// Rejects zero or negative lengths, self-loops and edges that reference
// unknown nodes. Lengths deviating more than 10% from the chord are kept but
// reported through warnings().
class RoadNetwork {
 public:
  RoadNetwork(std::vector<NetworkNode> nodes, const std::vector<EdgeSpec>& edges);

  const std::vector<NetworkNode>& nodes() const { return nodes_; }
  const std::vector<NetworkEdge>& edges() const { return edges_; }
  std::span<const Incidence> incident(std::size_t node) const {
    return {incidence_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
  }

  std::size_t component_of(std::size_t node) const { return component_[node]; }
  std::size_t component_count() const { return component_count_; }
  NetworkSummary summary() const { return {nodes_.size(), edges_.size(), component_count_}; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::optional<std::size_t> node_index(NodeId id) const;

 private:
  std::vector<NetworkNode> nodes_;
  std::vector<NetworkEdge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidence_;
  std::vector<std::size_t> component_;
  std::size_t component_count_ = 0;
  std::vector<std::string> warnings_;
  std::vector<std::pair<NodeId, std::size_t>> sorted_ids_;
};

// Edge table `from_id,to_id,length` (length may be empty) plus node table
// `node_id,x,y`.
RoadNetwork load_network_csv(std::istream& edges, std::istream& nodes,
                             std::string_view source_name = "<network csv>");

// FeatureCollection of LineString / MultiLineString features. Every vertex
// becomes a node (shared by exact coordinate equality) and every consecutive
// vertex pair an edge. An optional numeric `length` property is distributed
// over the segments in proportion to their chord lengths.
RoadNetwork load_network_geojson(std::istream& in, std::string_view source_name = "<geojson>");

// `.geojson`/`.json` → GeoJSON; otherwise an edge CSV whose node table is
// `nodes_path`.
RoadNetwork load_network(const std::filesystem::path& path,
                         const std::optional<std::filesystem::path>& nodes_path = std::nullopt);

// Location of a point projected onto the network.
struct SnappedPoint {
  PointId point_id = 0;
  std::size_t edge = 0;
  double offset = 0.0;         // meters along the edge, measured from edge.a
  double snap_distance = 0.0;  // planar distance from the point to its projection
};

// Projects (x, y) onto the nearest location of any edge; ties go to the lowest
// edge index. The network must contain at least one edge.
SnappedPoint snap_location(double x, double y, const RoadNetwork& net);

// Snaps every point. Points farther than `warn_distance` from the network are
// reported in `warnings` when it is provided.
std::vector<SnappedPoint> snap_points(const PointSet& points, const RoadNetwork& net,
                                      double warn_distance = 500.0,
                                      std::vector<std::string>* warnings = nullptr);

}  // namespace colocq
