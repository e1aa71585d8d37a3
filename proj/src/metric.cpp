#include "colocq/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>

#include "colocq/error.hpp"
#include "colocq/parallel.hpp"

namespace colocq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct QueueEntry {
  double distance;
  std::uint8_t is_point;
  std::size_t index;
  bool operator>(const QueueEntry& o) const {
    if (distance != o.distance) return distance > o.distance;
    if (is_point != o.is_point) return is_point > o.is_point;
    return index > o.index;
  }
};
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

// Per-thread search state, invalidated in O(1) by bumping the generation.
struct Scratch {
  std::vector<double> node_dist, point_dist;
  std::vector<std::uint32_t> node_seen, node_done, point_seen, point_done;
  std::uint32_t gen = 0;

  void prepare(std::size_t nodes, std::size_t points) {
    if (node_dist.size() < nodes || point_dist.size() < points || ++gen == 0) {
      nodes = std::max(nodes, node_dist.size());
      points = std::max(points, point_dist.size());
      node_dist.assign(nodes, kInf);
      point_dist.assign(points, kInf);
      node_seen.assign(nodes, 0);
      node_done.assign(nodes, 0);
      point_seen.assign(points, 0);
      point_done.assign(points, 0);
      gen = 1;
    }
  }
  bool improve_node(std::size_t n, double d) {
    if (node_seen[n] == gen && node_dist[n] <= d) return false;
    node_seen[n] = gen;
    node_dist[n] = d;
    return true;
  }
  bool improve_point(std::size_t p, double d) {
    if (point_seen[p] == gen && point_dist[p] <= d) return false;
    point_seen[p] = gen;
    point_dist[p] = d;
    return true;
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

std::size_t component_of_edge(const RoadNetwork& net, std::size_t edge) {
  return net.component_of(net.edges()[edge].a);
}

}  // namespace

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::euclidean ? "euclidean" : "network";
}

std::optional<MetricKind> parse_metric(std::string_view text) {
  if (text == "euclidean") return MetricKind::euclidean;
  if (text == "network") return MetricKind::network;
  return std::nullopt;
}

void MetricConfig::validate() const {
  if (kind == MetricKind::network && !network) {
    throw AnalysisError("network metric requires a road network");
  }
}

NeighborSearch::NeighborSearch(const PointSet& points, MetricConfig config)
    : points_(&points), config_(std::move(config)) {
  config_.validate();
  if (config_.kind == MetricKind::euclidean) {
    std::vector<Point2> xy;
    xy.reserve(points.size());
    for (const auto& p : points.points()) xy.push_back({p.x, p.y});
    tree_.emplace(std::move(xy));
    return;
  }

  const auto& net = *config_.network;
  snapped_ = snap_points(points, net, config_.snap_warn_distance, &warnings_);
  edge_offsets_.assign(net.edges().size() + 1, 0);
  for (const auto& s : snapped_) ++edge_offsets_[s.edge + 1];
  for (std::size_t e = 0; e < net.edges().size(); ++e) edge_offsets_[e + 1] += edge_offsets_[e];
  edge_points_.resize(snapped_.size());
  std::vector<std::size_t> fill(edge_offsets_.begin(), edge_offsets_.end() - 1);
  for (std::size_t i = 0; i < snapped_.size(); ++i) edge_points_[fill[snapped_[i].edge]++] = i;
}

template <class Stop>
std::vector<NeighborSearch::Reached> NeighborSearch::expand(std::size_t origin, Stop&& stop) const {
  const auto& net = *config_.network;
  const auto& edges = net.edges();
  auto& s = scratch();
  s.prepare(net.nodes().size(), snapped_.size());

  MinQueue queue;
  const auto& src = snapped_[origin];
  const auto& src_edge = edges[src.edge];
  if (s.improve_node(src_edge.a, src.offset)) queue.push({src.offset, 0, src_edge.a});
  double to_b = src_edge.length - src.offset;
  if (s.improve_node(src_edge.b, to_b)) queue.push({to_b, 0, src_edge.b});
  for (auto k = edge_offsets_[src.edge]; k < edge_offsets_[src.edge + 1]; ++k) {
    auto p = edge_points_[k];
    double d = std::abs(snapped_[p].offset - src.offset);
    if (s.improve_point(p, d)) queue.push({d, 1, p});
  }

  std::vector<Reached> reached;
  while (!queue.empty()) {
    auto top = queue.top();
    if (stop(top.distance, reached)) break;
    queue.pop();
    if (top.is_point) {
      if (s.point_done[top.index] == s.gen || s.point_dist[top.index] < top.distance) continue;
      s.point_done[top.index] = s.gen;
      if (top.index != origin) reached.push_back({top.index, top.distance});
      continue;
    }
    auto u = top.index;
    if (s.node_done[u] == s.gen || s.node_dist[u] < top.distance) continue;
    s.node_done[u] = s.gen;
    for (const auto& inc : net.incident(u)) {
      const auto& edge = edges[inc.edge];
      double next = top.distance + edge.length;
      if (s.node_done[inc.neighbor] != s.gen && s.improve_node(inc.neighbor, next)) {
        queue.push({next, 0, inc.neighbor});
      }
      for (auto k = edge_offsets_[inc.edge]; k < edge_offsets_[inc.edge + 1]; ++k) {
        auto p = edge_points_[k];
        double along = edge.a == u ? snapped_[p].offset : edge.length - snapped_[p].offset;
        double d = top.distance + along;
        if (s.point_done[p] != s.gen && s.improve_point(p, d)) queue.push({d, 1, p});
      }
    }
  }
  return reached;
}

NeighborList NeighborSearch::finish(std::size_t origin, std::size_t k,
                                    std::vector<std::pair<std::size_t, double>> candidates) const {
  const auto& pts = points_->points();
  std::sort(candidates.begin(), candidates.end(), [&](const auto& l, const auto& r) {
    if (l.second != r.second) return l.second < r.second;
    return pts[l.first].id < pts[r.first].id;
  });
  NeighborList list;
  list.origin = origin;
  list.origin_id = pts[origin].id;
  list.k = k;
  list.bandwidth_distance = candidates[k - 1].second;
  for (const auto& [idx, d] : candidates) {
    if (d > list.bandwidth_distance) break;
    list.neighbors.push_back({idx, pts[idx].id, d, list.neighbors.size() + 1});
  }
  return list;
}

NeighborList NeighborSearch::knn(std::size_t origin, std::size_t k) const {
  const auto n = points_->size();
  if (n < 2) throw AnalysisError("no eligible neighbors: the point set has fewer than 2 points");
  if (k == 0) throw AnalysisError("neighbor rank k must be at least 1");
  if (origin >= n) throw AnalysisError("origin index out of range");
  k = std::min(k, n - 1);

  std::vector<std::pair<std::size_t, double>> candidates;
  if (config_.kind == MetricKind::euclidean) {
    const auto& o = (*points_)[origin];
    Point2 q{o.x, o.y};
    auto nearest = tree_->nearest(q, k, origin);
    double kth2 = nearest.back().second;
    // Widen slightly so candidates whose rounded distance equals the k-th
    // distance are not lost; finish() trims on the distances themselves.
    std::vector<std::pair<std::size_t, double>> raw;
    tree_->within(q, kth2 * (1.0 + 1e-12), raw, origin);
    candidates.reserve(raw.size());
    for (const auto& [idx, d2] : raw) candidates.emplace_back(idx, std::sqrt(d2));
    return finish(origin, k, std::move(candidates));
  }

  auto reached = expand(origin, [k](double next, const std::vector<Reached>& r) {
    return r.size() >= k && next > r[k - 1].distance;
  });
  if (reached.size() < k) {
    throw AnalysisError("point " + std::to_string((*points_)[origin].id) + ": only " +
                        std::to_string(reached.size()) + " of " + std::to_string(n - 1) +
                        " other points are reachable on the network (" +
                        std::to_string(n - 1 - reached.size()) + " unreachable), k=" +
                        std::to_string(k) + " required");
  }
  candidates.reserve(reached.size());
  for (const auto& r : reached) candidates.emplace_back(r.index, r.distance);
  return finish(origin, k, std::move(candidates));
}

Distance NeighborSearch::distance(std::size_t a, std::size_t b) const {
  if (config_.kind == MetricKind::euclidean) {
    const auto& p = (*points_)[a];
    const auto& q = (*points_)[b];
    double dx = p.x - q.x, dy = p.y - q.y;
    return {std::sqrt(dx * dx + dy * dy), true};
  }
  return network_distance(*config_.network, snapped_[a], snapped_[b]);
}

std::vector<std::pair<std::size_t, double>> NeighborSearch::within(std::size_t origin,
                                                                   double radius) const {
  std::vector<std::pair<std::size_t, double>> out;
  if (config_.kind == MetricKind::euclidean) {
    const auto& o = (*points_)[origin];
    std::vector<std::pair<std::size_t, double>> raw;
    tree_->within({o.x, o.y}, radius * radius * (1.0 + 1e-12), raw, origin);
    for (const auto& [idx, d2] : raw) {
      double d = std::sqrt(d2);
      if (d <= radius) out.emplace_back(idx, d);
    }
  } else {
    auto reached = expand(origin, [radius](double next, const auto&) { return next > radius; });
    for (const auto& r : reached) out.emplace_back(r.index, r.distance);
  }
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    return l.second != r.second ? l.second < r.second : l.first < r.first;
  });
  return out;
}

Distance network_distance(const RoadNetwork& net, const SnappedPoint& a, const SnappedPoint& b) {
  const auto& edges = net.edges();
  if (component_of_edge(net, a.edge) != component_of_edge(net, b.edge)) return {kInf, false};

  const auto& ea = edges[a.edge];
  const auto& eb = edges[b.edge];
  double best = a.edge == b.edge ? std::abs(a.offset - b.offset) : kInf;

  auto& s = scratch();
  s.prepare(net.nodes().size(), 0);
  MinQueue queue;
  if (s.improve_node(ea.a, a.offset)) queue.push({a.offset, 0, ea.a});
  if (s.improve_node(ea.b, ea.length - a.offset)) queue.push({ea.length - a.offset, 0, ea.b});
  while (!queue.empty()) {
    auto top = queue.top();
    queue.pop();
    if (top.distance >= best) break;
    auto u = top.index;
    if (s.node_done[u] == s.gen || s.node_dist[u] < top.distance) continue;
    s.node_done[u] = s.gen;
    if (u == eb.a) best = std::min(best, top.distance + b.offset);
    if (u == eb.b) best = std::min(best, top.distance + (eb.length - b.offset));
    for (const auto& inc : net.incident(u)) {
      double next = top.distance + edges[inc.edge].length;
      if (s.node_done[inc.neighbor] != s.gen && s.improve_node(inc.neighbor, next)) {
        queue.push({next, 0, inc.neighbor});
      }
    }
  }
  return {best, true};
}

NeighborList knn(const SpatialPoint& origin, const PointSet& points, std::size_t k,
                 const MetricConfig& config) {
  auto idx = points.index_of(origin.id);
  if (!idx) throw AnalysisError("origin point " + std::to_string(origin.id) + " is not in the point set");
  NeighborSearch search(points, config);
  return search.knn(*idx, k);
}

Distance pairwise_distance(const SpatialPoint& a, const SpatialPoint& b, const MetricConfig& config) {
  config.validate();
  if (config.kind == MetricKind::euclidean) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return {std::sqrt(dx * dx + dy * dy), true};
  }
  const auto& net = *config.network;
  return network_distance(net, snap_location(a.x, a.y, net), snap_location(b.x, b.y, net));
}

NeighborTable::NeighborTable(const NeighborSearch& search, std::size_t k)
    : k_(k), metric_(search.kind()) {
  std::vector<std::size_t> all(search.points().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  build(search, all);
}

NeighborTable::NeighborTable(const NeighborSearch& search, std::size_t k,
                             std::span<const std::size_t> origins)
    : k_(k), metric_(search.kind()) {
  build(search, origins);
}

void NeighborTable::build(const NeighborSearch& search, std::span<const std::size_t> origins) {
  slot_.assign(search.points().size(), npos);
  lists_.resize(origins.size());
  for (std::size_t s = 0; s < origins.size(); ++s) slot_[origins[s]] = s;
  parallel_for(origins.size(), [&](std::size_t s) { lists_[s] = search.knn(origins[s], k_); });
}

const NeighborList& NeighborTable::list(std::size_t origin) const {
  if (origin >= slot_.size() || slot_[origin] == npos) {
    throw AnalysisError("neighbor table has no list for point index " + std::to_string(origin));
  }
  return lists_[slot_[origin]];
}

}  // namespace colocq
