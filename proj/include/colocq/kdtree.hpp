#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace colocq {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Static 2-d tree over a point array for exact nearest-neighbor queries.
// Distances are squared Euclidean. Results are ordered by (distance, index),
// so the answer never depends on traversal order.
class KdTree {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  explicit KdTree(std::vector<Point2> points, std::size_t leaf_size = 12);

  std::size_t size() const { return points_.size(); }
  const Point2& point(std::size_t i) const { return points_[i]; }

  // The k points closest to q, skipping index `exclude`.
  std::vector<std::pair<std::size_t, double>> nearest(Point2 q, std::size_t k,
                                                      std::size_t exclude = npos) const;

  // Every point with squared distance <= r2, skipping `exclude`; appended to
  // `out` unsorted.
  void within(Point2 q, double r2, std::vector<std::pair<std::size_t, double>>& out,
              std::size_t exclude = npos) const;

 private:
  struct Node {
    std::uint32_t begin, end;   // range into order_
    std::int32_t left, right;   // children, -1 for a leaf
    double split;
    std::uint8_t axis;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size);

  std::vector<Point2> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace colocq
