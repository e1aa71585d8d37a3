#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colocq/inference.hpp"
#include "colocq/metric.hpp"
#include "colocq/point_data.hpp"

namespace colocq {

enum class EnvelopeBand { below, within, above };

// Cross K values on an ascending distance grid with per-distance min/max
// envelopes over random-relabeling trials.
struct CrossKCurve {
  std::vector<double> distances;
  std::vector<double> observed;
  std::vector<double> envelope_low;
  std::vector<double> envelope_high;
  std::size_t simulations = 0;
  std::size_t unreachable_pairs = 0;  // A-B pairs never counted (network metric)
  std::vector<std::string> warnings;

  // above: colocation at that distance; below: dispersion.
  EnvelopeBand band(std::size_t step) const;
  std::size_t steps_within() const;
};

// Grid of `steps` distances from 0 to d_max inclusive.
std::vector<double> distance_grid(double d_max, std::size_t steps);

// K_AB(d) = area / (N_A N_B) * #{(i in A, j in B, i != j) : d_ij <= d} with no
// edge correction. Trial t relabels with stream (seed, kCrossKStream, t).
CrossKCurve cross_k(const PointSet& points, std::string_view a, std::string_view b, double d_max,
                    std::size_t steps, const MetricConfig& metric, double study_area,
                    const SimulationConfig& sim);

// Clark-Evans nearest neighbor index (Euclidean, no edge correction).
struct NNIResult {
  double index = 0.0;
  double z_score = 0.0;
  std::size_t n = 0;
  double area = 0.0;
  double mean_distance = 0.0;
  double expected_distance = 0.0;
};

NNIResult nni(const PointSet& points, double study_area);
// Restricted to the points of one category.
NNIResult nni(const PointSet& points, std::string_view category, double study_area);
NNIResult nni(std::span<const Point2> points, double study_area);

// Area of the axis-aligned bounding box of all points.
double bounding_box_area(const PointSet& points);

// Pearson product-moment correlation; NaN when either series is constant.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace colocq
