#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colocq/kdtree.hpp"
#include "colocq/point_data.hpp"
#include "colocq/road_network.hpp"

namespace colocq {

enum class MetricKind { euclidean, network };

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view text);

struct MetricConfig {
  MetricKind kind = MetricKind::euclidean;
  std::shared_ptr<const RoadNetwork> network;  // required for MetricKind::network
  double snap_warn_distance = 500.0;

  static MetricConfig euclidean() { return {}; }
  static MetricConfig on_network(std::shared_ptr<const RoadNetwork> net) {
    return {MetricKind::network, std::move(net), 500.0};
  }
  // Throws AnalysisError when kind is network and no network is attached.
  void validate() const;
};

struct Neighbor {
  std::size_t index = 0;  // position in the PointSet
  PointId id = 0;
  double distance = 0.0;
  std::size_t rank = 0;   // 1-based position in the list
};

// Neighbors of one origin ordered by (distance, id). When the k-th distance
// is shared by later points the whole tie group is included, so the list may
// be longer than k. bandwidth_distance is the distance at rank k.
struct NeighborList {
  std::size_t origin = 0;
  PointId origin_id = 0;
  std::size_t k = 0;
  std::vector<Neighbor> neighbors;
  double bandwidth_distance = 0.0;
};

struct Distance {
  double meters = 0.0;
  bool reachable = true;  // false: different network components, meters is +inf
};

// Distance queries over one PointSet under one metric. Euclidean queries use
// a kd-tree; network queries run a shortest-path search from the origin's
// snapped location. The PointSet must outlive the search object. All const
// members are safe to call concurrently.
class NeighborSearch {
 public:
  NeighborSearch(const PointSet& points, MetricConfig config);

  const PointSet& points() const { return *points_; }
  const MetricConfig& config() const { return config_; }
  MetricKind kind() const { return config_.kind; }

  // k nearest other points of points()[origin], tie group at rank k expanded.
  // k is capped at N-1. Throws AnalysisError if N < 2 or, on a network, if
  // fewer than k points are reachable.
  NeighborList knn(std::size_t origin, std::size_t k) const;

  Distance distance(std::size_t a, std::size_t b) const;

  // Every other point within `radius`, ordered by (distance, index).
  // Unreachable points are never returned.
  std::vector<std::pair<std::size_t, double>> within(std::size_t origin, double radius) const;

  // Empty for the Euclidean metric.
  const std::vector<SnappedPoint>& snapped() const { return snapped_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  struct Reached {
    std::size_t index;
    double distance;
  };
  // Settles points in order of network distance from `origin` until `stop`
  // returns true for the next distance to settle.
  template <class Stop>
  std::vector<Reached> expand(std::size_t origin, Stop&& stop) const;

  NeighborList finish(std::size_t origin, std::size_t k,
                      std::vector<std::pair<std::size_t, double>> candidates) const;

  const PointSet* points_;
  MetricConfig config_;
  std::optional<KdTree> tree_;
  std::vector<SnappedPoint> snapped_;
  std::vector<std::size_t> edge_offsets_;  // points grouped by snapped edge
  std::vector<std::size_t> edge_points_;
  std::vector<std::string> warnings_;
};

// Shortest network distance between two snapped locations.
Distance network_distance(const RoadNetwork& net, const SnappedPoint& a, const SnappedPoint& b);

// Convenience wrappers; build a NeighborSearch per call.
NeighborList knn(const SpatialPoint& origin, const PointSet& points, std::size_t k,
                 const MetricConfig& config);
Distance pairwise_distance(const SpatialPoint& a, const SpatialPoint& b, const MetricConfig& config);

// Neighbor lists at one rank for a set of origins, computed once and shared
// by every statistic and every simulation trial on the same geometry.
class NeighborTable {
 public:
  // All points as origins.
  NeighborTable(const NeighborSearch& search, std::size_t k);
  NeighborTable(const NeighborSearch& search, std::size_t k, std::span<const std::size_t> origins);

  std::size_t k() const { return k_; }
  MetricKind metric() const { return metric_; }
  std::size_t point_count() const { return slot_.size(); }
  bool covers(std::size_t origin) const { return slot_[origin] != npos; }
  const NeighborList& list(std::size_t origin) const;

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  void build(const NeighborSearch& search, std::span<const std::size_t> origins);

  std::size_t k_;
  MetricKind metric_;
  std::vector<std::size_t> slot_;
  std::vector<NeighborList> lists_;
};

}  // namespace colocq
