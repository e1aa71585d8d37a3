#include "colocq/colocation.hpp"

#include <cmath>
#include <stdexcept>

#include "colocq/error.hpp"
#include "colocq/parallel.hpp"

namespace colocq {

std::string_view to_string(KernelKind kind) {
  return kind == KernelKind::gaussian ? "gaussian" : "box";
}

std::optional<KernelKind> parse_kernel(std::string_view text) {
  if (text == "gaussian") return KernelKind::gaussian;
  if (text == "box") return KernelKind::box;
  return std::nullopt;
}

double kernel_weight(double d_ij, double d_ib, KernelSpec kernel) {
  if (!(d_ij >= 0.0) || !(d_ib >= 0.0)) {
    throw AnalysisError("kernel distances must be non-negative");
  }
  if (d_ib == 0.0) return 1.0;
  if (kernel.kind == KernelKind::box) return d_ij <= d_ib ? 1.0 : 0.0;
  double ratio = d_ij / d_ib;
  return std::exp(-0.5 * ratio * ratio);
}

LocalKernel::LocalKernel(const NeighborList& list, KernelSpec kernel) {
  weights_.reserve(list.neighbors.size());
  for (const auto& n : list.neighbors) {
    double w = kernel_weight(n.distance, list.bandwidth_distance, kernel);
    weights_.push_back(w);
    total_ += w;
  }
  if (!(total_ > 0.0)) throw AnalysisError("neighbor list has no positive kernel weight");
}

double expected_b_share(std::size_t n_b, std::size_t n_total, bool origin_is_b) {
  auto eligible_b = origin_is_b ? n_b - 1 : n_b;
  return static_cast<double>(eligible_b) / static_cast<double>(n_total - 1);
}

void require_category(const PointSet& points, std::string_view category, std::string_view role) {
  if (!points.has_category(category)) {
    throw AnalysisError("category '" + std::string(category) + "' (" + std::string(role) +
                        ") is absent from the point set");
  }
}

void require_pair(const PointSet& points, std::string_view a, std::string_view b) {
  if (points.size() < 2) throw AnalysisError("no eligible neighbors: fewer than 2 points");
  require_category(points, a, "a");
  require_category(points, b, "b");
  if (a == b && points.count(a) < 2) {
    throw AnalysisError("category '" + std::string(a) +
                        "' has a single point; no within-category neighbor is possible");
  }
}

double b_neighbor_count(const NeighborTable& table, std::span<const CategoryCode> labels,
                        CategoryCode a, CategoryCode b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != a) continue;
    const auto& list = table.list(i);
    std::size_t hits = 0;
    for (const auto& n : list.neighbors) hits += labels[n.index] == b;
    sum += static_cast<double>(hits) / static_cast<double>(list.neighbors.size());
  }
  return sum;
}

CLQResult global_clq(const PointSet& points, const NeighborTable& table, std::string_view a,
                     std::string_view b) {
  require_pair(points, a, b);
  CLQResult r;
  r.a_category = std::string(a);
  r.b_category = std::string(b);
  r.n_a = points.count(a);
  r.n_b = points.count(b);
  r.n_total = points.size();
  r.k = table.k();
  r.metric = table.metric();
  r.b_neighbor_count = b_neighbor_count(table, points.labels(), *points.code_of(a), *points.code_of(b));
  double observed = r.b_neighbor_count / static_cast<double>(r.n_a);
  r.value = observed / expected_b_share(r.n_b, r.n_total, a == b);
  return r;
}

CLQResult global_clq(const PointSet& points, std::string_view a, std::string_view b, std::size_t k,
                     const MetricConfig& metric) {
  require_pair(points, a, b);
  NeighborSearch search(points, metric);
  auto origins = points.indices_of(a);
  NeighborTable table(search, k, origins);
  return global_clq(points, table, a, b);
}

namespace {

LCLQRecord local_record(const PointSet& points, const NeighborList& list, std::string_view b,
                        KernelSpec kernel, std::size_t k, MetricKind metric) {
  const auto& origin = points[list.origin];
  const auto b_code = *points.code_of(b);
  const auto labels = points.labels();

  LCLQRecord rec;
  rec.point_id = origin.id;
  rec.index = list.origin;
  rec.a_category = origin.category;
  rec.b_category = std::string(b);
  rec.k = k;
  rec.metric = metric;
  rec.kernel = kernel.kind;

  LocalKernel weights(list, kernel);
  rec.b_share = weights.share([&](std::size_t r) { return labels[list.neighbors[r].index] == b_code; });
  double expected = expected_b_share(points.count(b), points.size(), origin.category == b);
  rec.value = rec.b_share / expected;
  if (rec.value > (1.0 / expected) * (1.0 + 1e-12)) {
    throw std::logic_error("local quotient exceeds its theoretical maximum");
  }
  return rec;
}

void require_local(const PointSet& points, std::string_view origin_category, std::string_view b) {
  if (points.size() < 2) throw AnalysisError("no eligible neighbors: fewer than 2 points");
  require_category(points, b, "b");
  if (origin_category == b && points.count(b) < 2) {
    throw AnalysisError("category '" + std::string(b) +
                        "' has a single point; no within-category neighbor is possible");
  }
}

}  // namespace

LCLQRecord lclq(const PointSet& points, PointId origin, std::string_view b, std::size_t k,
                const MetricConfig& metric, KernelSpec kernel) {
  auto idx = points.index_of(origin);
  if (!idx) throw AnalysisError("point " + std::to_string(origin) + " does not exist");
  require_local(points, points[*idx].category, b);
  NeighborSearch search(points, metric);
  return local_record(points, search.knn(*idx, k), b, kernel, k, metric.kind);
}

std::vector<LCLQRecord> lclq_all(const PointSet& points, const NeighborTable& table,
                                 std::string_view a, std::string_view b, KernelSpec kernel) {
  require_pair(points, a, b);
  auto origins = points.indices_of(a);
  std::vector<LCLQRecord> out(origins.size());
  parallel_for(origins.size(), [&](std::size_t s) {
    out[s] = local_record(points, table.list(origins[s]), b, kernel, table.k(), table.metric());
  });
  return out;
}

std::vector<LCLQRecord> lclq_all(const PointSet& points, std::string_view a, std::string_view b,
                                 std::size_t k, const MetricConfig& metric, KernelSpec kernel) {
  require_pair(points, a, b);
  NeighborSearch search(points, metric);
  auto origins = points.indices_of(a);
  NeighborTable table(search, k, origins);
  return lclq_all(points, table, a, b, kernel);
}

}  // namespace colocq
