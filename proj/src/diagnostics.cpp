#include "colocq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "colocq/colocation.hpp"
#include "colocq/error.hpp"
#include "colocq/kdtree.hpp"
#include "colocq/parallel.hpp"

namespace colocq {

EnvelopeBand CrossKCurve::band(std::size_t step) const {
  if (observed[step] > envelope_high[step]) return EnvelopeBand::above;
  if (observed[step] < envelope_low[step]) return EnvelopeBand::below;
  return EnvelopeBand::within;
}

std::size_t CrossKCurve::steps_within() const {
  std::size_t n = 0;
  for (std::size_t s = 0; s < distances.size(); ++s) n += band(s) == EnvelopeBand::within;
  return n;
}

std::vector<double> distance_grid(double d_max, std::size_t steps) {
  if (!(d_max > 0.0) || !std::isfinite(d_max)) throw AnalysisError("d_max must be positive");
  if (steps < 2) throw AnalysisError("the distance grid needs at least 2 steps");
  std::vector<double> grid(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    grid[s] = d_max * static_cast<double>(s) / static_cast<double>(steps - 1);
  }
  grid.back() = d_max;
  return grid;
}

namespace {

// Unordered pair within d_max and the first grid step at which it counts.
struct Pair {
  std::uint32_t i, j;
  std::uint32_t step;
};

// Counts A->B pairs per first-counting step, then accumulates along the grid.
std::vector<double> k_values(std::span<const Pair> pairs, std::span<const CategoryCode> labels,
                             CategoryCode a, CategoryCode b, std::size_t steps, double scale) {
  std::vector<std::uint64_t> hist(steps, 0);
  for (const auto& p : pairs) {
    auto li = labels[p.i], lj = labels[p.j];
    hist[p.step] += (li == a && lj == b) + (lj == a && li == b);
  }
  std::vector<double> out(steps);
  std::uint64_t running = 0;
  for (std::size_t s = 0; s < steps; ++s) {
    running += hist[s];
    out[s] = scale * static_cast<double>(running);
  }
  return out;
}

}  // namespace

CrossKCurve cross_k(const PointSet& points, std::string_view a, std::string_view b, double d_max,
                    std::size_t steps, const MetricConfig& metric, double study_area,
                    const SimulationConfig& sim) {
  require_category(points, a, "a");
  require_category(points, b, "b");
  if (!(study_area > 0.0) || !std::isfinite(study_area)) {
    throw AnalysisError("study area must be positive and finite");
  }
  sim.validate();

  CrossKCurve curve;
  curve.distances = distance_grid(d_max, steps);
  curve.simulations = sim.trials;

  NeighborSearch search(points, metric);
  curve.warnings = search.warnings();
  const auto n = points.size();

  // Every unordered pair within d_max, gathered once and reused by all trials.
  std::vector<std::vector<Pair>> per_origin(n);
  parallel_for(n, [&](std::size_t i) {
    for (const auto& [j, d] : search.within(i, d_max)) {
      if (j <= i) continue;
      auto step = std::lower_bound(curve.distances.begin(), curve.distances.end(), d) -
                  curve.distances.begin();
      per_origin[i].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                               static_cast<std::uint32_t>(step)});
    }
  });
  std::vector<Pair> pairs;
  for (auto& v : per_origin) {
    pairs.insert(pairs.end(), v.begin(), v.end());
    std::vector<Pair>().swap(v);
  }

  if (metric.kind == MetricKind::network) {
    const auto& net = *metric.network;
    const auto& snapped = search.snapped();
    auto component = [&](std::size_t i) { return net.component_of(net.edges()[snapped[i].edge].a); };
    const auto b_idx = points.indices_of(b);
    for (auto i : points.indices_of(a)) {
      for (auto j : b_idx) {
        if (j != i && component(i) != component(j)) ++curve.unreachable_pairs;
      }
    }
    if (curve.unreachable_pairs > 0) {
      curve.warnings.push_back(std::to_string(curve.unreachable_pairs) +
                               " A-B pairs are disconnected on the network and never counted");
    }
  }

  const auto a_code = *points.code_of(a);
  const auto b_code = *points.code_of(b);
  const double scale =
      study_area / (static_cast<double>(points.count(a)) * static_cast<double>(points.count(b)));
  curve.observed = k_values(pairs, points.labels(), a_code, b_code, steps, scale);

  std::vector<std::vector<double>> trials(sim.trials);
  parallel_for(sim.trials, [&](std::size_t t) {
    Rng rng(stream_seed(sim.seed, kCrossKStream, t));
    auto labels = relabel_global(points.labels(), rng);
    trials[t] = k_values(pairs, labels, a_code, b_code, steps, scale);
  });
  curve.envelope_low.assign(steps, std::numeric_limits<double>::infinity());
  curve.envelope_high.assign(steps, -std::numeric_limits<double>::infinity());
  for (const auto& values : trials) {
    for (std::size_t s = 0; s < steps; ++s) {
      curve.envelope_low[s] = std::min(curve.envelope_low[s], values[s]);
      curve.envelope_high[s] = std::max(curve.envelope_high[s], values[s]);
    }
  }
  return curve;
}

NNIResult nni(std::span<const Point2> points, double study_area) {
  if (points.size() < 2) throw AnalysisError("nearest neighbor index needs at least 2 points");
  if (!(study_area > 0.0) || !std::isfinite(study_area)) {
    throw AnalysisError("study area must be positive and finite");
  }
  KdTree tree(std::vector<Point2>(points.begin(), points.end()));
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sum += std::sqrt(tree.nearest(points[i], 1, i).front().second);
  }
  NNIResult r;
  r.n = points.size();
  r.area = study_area;
  const double n = static_cast<double>(r.n);
  r.mean_distance = sum / n;
  r.expected_distance = 0.5 / std::sqrt(n / study_area);
  const double standard_error = 0.26136 / std::sqrt(n * n / study_area);
  r.index = r.mean_distance / r.expected_distance;
  r.z_score = (r.mean_distance - r.expected_distance) / standard_error;
  return r;
}

NNIResult nni(const PointSet& points, double study_area) {
  std::vector<Point2> xy;
  xy.reserve(points.size());
  for (const auto& p : points.points()) xy.push_back({p.x, p.y});
  return nni(xy, study_area);
}

NNIResult nni(const PointSet& points, std::string_view category, double study_area) {
  require_category(points, category, "nni");
  std::vector<Point2> xy;
  for (auto i : points.indices_of(category)) xy.push_back({points[i].x, points[i].y});
  return nni(xy, study_area);
}

double bounding_box_area(const PointSet& points) {
  if (points.empty()) return 0.0;
  double min_x = points[0].x, max_x = min_x, min_y = points[0].y, max_y = min_y;
  for (const auto& p : points.points()) {
    min_x = std::min(min_x, p.x), max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y), max_y = std::max(max_y, p.y);
  }
  return (max_x - min_x) * (max_y - min_y);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw AnalysisError("correlation needs two series of equal length >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy, sxx += dx * dx, syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace colocq
