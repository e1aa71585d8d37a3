#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colocq/metric.hpp"
#include "colocq/point_data.hpp"

namespace colocq {

enum class KernelKind { gaussian, box };

std::string_view to_string(KernelKind kind);
std::optional<KernelKind> parse_kernel(std::string_view text);

struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
};

// Weight of a neighbor at distance d_ij from the origin whose bandwidth
// distance is d_ib. Gaussian: exp(-0.5 d_ij^2 / d_ib^2). Box: 1 inside the
// bandwidth, 0 outside. A zero bandwidth (every neighbor coincident with the
// origin) weights every neighbor 1.
double kernel_weight(double d_ij, double d_ib, KernelSpec kernel);

// Kernel weights of one neighbor list. share() evaluates the weighted
// proportion of neighbors for which is_b(rank_index) holds; observed values
// and simulated values go through the same summation so equal label patterns
// give bitwise equal results.
class LocalKernel {
 public:
  LocalKernel(const NeighborList& list, KernelSpec kernel);

  std::span<const double> weights() const { return weights_; }
  double total() const { return total_; }

  template <class IsB>
  double share(IsB&& is_b) const {
    double num = 0.0;
    for (std::size_t r = 0; r < weights_.size(); ++r) {
      if (is_b(r)) num += weights_[r];
    }
    return num / total_;
  }

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

// Expected proportion of B points among the neighbors of a point under random
// labeling: N_B' / (N - 1), where N_B' = N_B - 1 when the origin itself is B.
double expected_b_share(std::size_t n_b, std::size_t n_total, bool origin_is_b);

struct CLQResult {
  std::string a_category;
  std::string b_category;
  double value = 0.0;
  double b_neighbor_count = 0.0;  // A points' fractional count of B nearest neighbors
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::size_t n_total = 0;
  std::size_t k = 0;
  MetricKind metric = MetricKind::euclidean;
};

struct LCLQRecord {
  PointId point_id = 0;
  std::size_t index = 0;
  std::string a_category;
  std::string b_category;
  double value = 0.0;
  double b_share = 0.0;  // kernel-weighted proportion of B neighbors, in [0, 1]
  std::optional<double> p_value;
  bool significant = false;
  std::size_t k = 0;
  MetricKind metric = MetricKind::euclidean;
  KernelKind kernel = KernelKind::gaussian;
};

// Global colocation quotient of A toward B using the tie-expanded k nearest
// neighbors of every A point; each neighbor of point i counts 1/nn_i.
CLQResult global_clq(const PointSet& points, std::string_view a, std::string_view b, std::size_t k,
                     const MetricConfig& metric);
// Same, reusing a neighbor table that covers every A point.
CLQResult global_clq(const PointSet& points, const NeighborTable& table, std::string_view a,
                     std::string_view b);

// Sum over points labelled `a` of the fraction of their neighbors labelled
// `b`, under an arbitrary labeling of the same geometry. The table must
// cover every point labelled `a`.
double b_neighbor_count(const NeighborTable& table, std::span<const CategoryCode> labels,
                        CategoryCode a, CategoryCode b);

// Local colocation quotient of one point toward B.
LCLQRecord lclq(const PointSet& points, PointId origin, std::string_view b, std::size_t k,
                const MetricConfig& metric, KernelSpec kernel);

// One record per A point, in input order.
std::vector<LCLQRecord> lclq_all(const PointSet& points, std::string_view a, std::string_view b,
                                 std::size_t k, const MetricConfig& metric, KernelSpec kernel);
std::vector<LCLQRecord> lclq_all(const PointSet& points, const NeighborTable& table,
                                 std::string_view a, std::string_view b, KernelSpec kernel);

// Shared precondition checks; throw AnalysisError.
void require_category(const PointSet& points, std::string_view category, std::string_view role);
void require_pair(const PointSet& points, std::string_view a, std::string_view b);

}  // namespace colocq
