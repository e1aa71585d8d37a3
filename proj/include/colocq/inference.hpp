#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "colocq/colocation.hpp"
#include "colocq/metric.hpp"
#include "colocq/point_data.hpp"

namespace colocq {

using Rng = std::mt19937_64;

struct SimulationConfig {
  std::size_t trials = 999;
  std::uint64_t seed = 0;
  double alpha = 0.05;

  // Throws AnalysisError unless trials >= 19 and alpha lies in (0, 1).
  void validate() const;
};

// Two-tailed Monte Carlo p-value: 2 * min(n_ge + 1, n_le + 1) / (M + 1),
// capped at 1, where ties with the observed value count on both sides.
struct PValue {
  double value = 1.0;
  std::size_t n_ge = 0;
  std::size_t n_le = 0;
  std::size_t trials = 0;
};

PValue two_tailed_p(double observed, std::span<const double> simulated);

// Seed of an independent random stream derived from the master seed, a
// domain tag and a key (point id or trial number).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t domain, std::uint64_t key);

// Stream domains.
inline constexpr std::uint64_t kLocalStream = 1;
inline constexpr std::uint64_t kGlobalStream = 2;
inline constexpr std::uint64_t kCrossKStream = 3;

// Forward Fisher-Yates: for t = 0, 1, ... swaps values[t] with values[j],
// j uniform in [t, n). Performs min(steps, n - 1) steps, after which the
// first `steps` entries are a uniform ordered sample without replacement.
// When `swaps` is given the chosen j of every step is appended so the
// caller can undo the permutation.
void shuffle_prefix(std::span<CategoryCode> values, std::size_t steps, Rng& rng,
                    std::vector<std::size_t>* swaps = nullptr);

// Uniform permutation of all labels; the category multiset is unchanged.
std::vector<CategoryCode> relabel_global(std::span<const CategoryCode> labels, Rng& rng);
std::vector<CategoryCode> relabel_global(const PointSet& points, Rng& rng);

// Uniform permutation of every label except that of point `fixed`, which
// keeps its own. The free labels are laid out in `visit_order` (every index
// except `fixed`, each once; input order when empty), shuffled with a full
// forward Fisher-Yates, and handed back in the same order.
std::vector<CategoryCode> relabel_restricted(std::span<const CategoryCode> labels, std::size_t fixed,
                                             Rng& rng, std::span<const std::size_t> visit_order = {});
std::vector<CategoryCode> relabel_restricted(const PointSet& points, PointId fixed_id, Rng& rng);

struct CLQTest {
  CLQResult clq;
  PValue p;
  std::vector<double> simulated;  // one CLQ per trial, in trial order
};

using Progress = std::function<void(std::size_t done, std::size_t total)>;

// Global CLQ with a random-relabeling test. Trial t draws from stream
// (seed, kGlobalStream, t). The table must cover every point.
CLQTest test_global_clq(const PointSet& points, const NeighborTable& table, std::string_view a,
                        std::string_view b, const SimulationConfig& sim);
CLQTest test_global_clq(const PointSet& points, std::string_view a, std::string_view b, std::size_t k,
                        const MetricConfig& metric, const SimulationConfig& sim);

// Local CLQ of every A point with a restricted random labeling test. Point i
// draws from stream (seed, kLocalStream, id_i); each trial permutes all other
// labels, with i's ranked neighbors visited first, and re-evaluates the
// quotient on i's fixed neighbor set.
std::vector<LCLQRecord> test_lclq(const PointSet& points, const NeighborTable& table,
                                  std::string_view a, std::string_view b, KernelSpec kernel,
                                  const SimulationConfig& sim, const Progress& progress = {});
std::vector<LCLQRecord> test_lclq(const PointSet& points, std::string_view a, std::string_view b,
                                  std::size_t k, const MetricConfig& metric, KernelSpec kernel,
                                  const SimulationConfig& sim, const Progress& progress = {});

// The simulated quotients of one point, in trial order.
std::vector<double> simulate_local(const PointSet& points, const NeighborList& list,
                                   std::string_view b, KernelSpec kernel, const SimulationConfig& sim);

}  // namespace colocq
