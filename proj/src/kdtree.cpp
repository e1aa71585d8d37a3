#include "colocq/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace colocq {

namespace {

double coord(const Point2& p, int axis) { return axis == 0 ? p.x : p.y; }

double sq_dist(Point2 a, Point2 b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

KdTree::KdTree(std::vector<Point2> points, std::size_t leaf_size) : points_(std::move(points)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) build(0, static_cast<std::uint32_t>(points_.size()), std::max<std::size_t>(leaf_size, 1));
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size) {
  auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end, -1, -1, 0.0, 0});
  if (end - begin <= leaf_size) return id;

  // Split on the axis of widest spread at the median.
  double lo[2] = {points_[order_[begin]].x, points_[order_[begin]].y};
  double hi[2] = {lo[0], lo[1]};
  for (auto i = begin; i < end; ++i) {
    const auto& p = points_[order_[i]];
    lo[0] = std::min(lo[0], p.x), hi[0] = std::max(hi[0], p.x);
    lo[1] = std::min(lo[1], p.y), hi[1] = std::max(hi[1], p.y);
  }
  int axis = (hi[0] - lo[0]) >= (hi[1] - lo[1]) ? 0 : 1;
  auto mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return coord(points_[a], axis) < coord(points_[b], axis);
                   });
  double split = coord(points_[order_[mid]], axis);
  auto left = build(begin, mid, leaf_size);
  auto right = build(mid, end, leaf_size);
  auto& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.split = split;
  node.axis = static_cast<std::uint8_t>(axis);
  return id;
}

std::vector<std::pair<std::size_t, double>> KdTree::nearest(Point2 q, std::size_t k,
                                                            std::size_t exclude) const {
  using Entry = std::pair<double, std::size_t>;  // (d2, index); max-heap on both
  std::priority_queue<Entry> heap;
  if (k == 0 || nodes_.empty()) return {};

  auto visit = [&](auto&& self, std::int32_t id) -> void {
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (auto i = node.begin; i < node.end; ++i) {
        std::size_t idx = order_[i];
        if (idx == exclude) continue;
        Entry e{sq_dist(q, points_[idx]), idx};
        if (heap.size() < k) {
          heap.push(e);
        } else if (e < heap.top()) {
          heap.pop();
          heap.push(e);
        }
      }
      return;
    }
    // Left holds coordinates <= split, right holds >= split.
    double delta = coord(q, node.axis) - node.split;
    auto near = delta <= 0.0 ? node.left : node.right;
    auto far = delta <= 0.0 ? node.right : node.left;
    self(self, near);
    if (heap.size() < k || delta * delta <= heap.top().first) self(self, far);
  };
  visit(visit, 0);

  std::vector<std::pair<std::size_t, double>> out(heap.size());
  for (auto i = out.size(); i-- > 0;) {
    out[i] = {heap.top().second, heap.top().first};
    heap.pop();
  }
  return out;
}

void KdTree::within(Point2 q, double r2, std::vector<std::pair<std::size_t, double>>& out,
                    std::size_t exclude) const {
  if (nodes_.empty()) return;
  auto visit = [&](auto&& self, std::int32_t id) -> void {
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (auto i = node.begin; i < node.end; ++i) {
        std::size_t idx = order_[i];
        if (idx == exclude) continue;
        double d2 = sq_dist(q, points_[idx]);
        if (d2 <= r2) out.emplace_back(idx, d2);
      }
      return;
    }
    double delta = coord(q, node.axis) - node.split;
    if (delta <= 0.0 || delta * delta <= r2) self(self, node.left);
    if (delta >= 0.0 || delta * delta <= r2) self(self, node.right);
  };
  visit(visit, 0);
}

}  // namespace colocq
