#include "colocq/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

#include "colocq/error.hpp"
#include "colocq/parallel.hpp"

namespace colocq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class ProgressReporter {
 public:
  ProgressReporter(const Progress& progress, std::size_t total) : progress_(progress), total_(total) {}
  void tick() {
    if (!progress_) return;
    auto done = ++done_;
    std::lock_guard lock(mutex_);
    progress_(done, total_);
  }

 private:
  const Progress& progress_;
  std::size_t total_;
  std::atomic<std::size_t> done_{0};
  std::mutex mutex_;
};

}  // namespace

void SimulationConfig::validate() const {
  if (trials < 19) {
    throw AnalysisError("at least 19 simulation trials are required, got " + std::to_string(trials));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw AnalysisError("significance level alpha must lie in (0, 1)");
  }
}

PValue two_tailed_p(double observed, std::span<const double> simulated) {
  PValue p;
  p.trials = simulated.size();
  for (double v : simulated) {
    p.n_ge += v >= observed;
    p.n_le += v <= observed;
  }
  double minor = static_cast<double>(std::min(p.n_ge, p.n_le) + 1);
  p.value = std::min(1.0, 2.0 * minor / static_cast<double>(p.trials + 1));
  return p;
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t domain, std::uint64_t key) {
  return splitmix64(splitmix64(master ^ splitmix64(domain)) ^ key);
}

void shuffle_prefix(std::span<CategoryCode> values, std::size_t steps, Rng& rng,
                    std::vector<std::size_t>* swaps) {
  const auto n = values.size();
  if (n < 2) return;
  steps = std::min(steps, n - 1);
  for (std::size_t t = 0; t < steps; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, n - 1);
    auto j = pick(rng);
    std::swap(values[t], values[j]);
    if (swaps) swaps->push_back(j);
  }
}

std::vector<CategoryCode> relabel_global(std::span<const CategoryCode> labels, Rng& rng) {
  std::vector<CategoryCode> out(labels.begin(), labels.end());
  shuffle_prefix(out, out.size(), rng);
  return out;
}

std::vector<CategoryCode> relabel_global(const PointSet& points, Rng& rng) {
  return relabel_global(points.labels(), rng);
}

std::vector<CategoryCode> relabel_restricted(std::span<const CategoryCode> labels, std::size_t fixed,
                                             Rng& rng, std::span<const std::size_t> visit_order) {
  if (fixed >= labels.size()) throw AnalysisError("fixed point index out of range");
  std::vector<std::size_t> order;
  if (visit_order.empty()) {
    order.reserve(labels.size() - 1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i != fixed) order.push_back(i);
    }
    visit_order = order;
  } else if (visit_order.size() != labels.size() - 1) {
    throw AnalysisError("visit order must list every point except the fixed one");
  }

  std::vector<CategoryCode> pool;
  pool.reserve(visit_order.size());
  for (auto i : visit_order) pool.push_back(labels[i]);
  shuffle_prefix(pool, pool.size(), rng);

  std::vector<CategoryCode> out(labels.begin(), labels.end());
  for (std::size_t t = 0; t < visit_order.size(); ++t) out[visit_order[t]] = pool[t];
  return out;
}

std::vector<CategoryCode> relabel_restricted(const PointSet& points, PointId fixed_id, Rng& rng) {
  auto idx = points.index_of(fixed_id);
  if (!idx) throw AnalysisError("point " + std::to_string(fixed_id) + " does not exist");
  return relabel_restricted(points.labels(), *idx, rng);
}

CLQTest test_global_clq(const PointSet& points, const NeighborTable& table, std::string_view a,
                        std::string_view b, const SimulationConfig& sim) {
  sim.validate();
  CLQTest test;
  test.clq = global_clq(points, table, a, b);
  const auto a_code = *points.code_of(a);
  const auto b_code = *points.code_of(b);
  const double expected = expected_b_share(test.clq.n_b, test.clq.n_total, a == b);
  const double n_a = static_cast<double>(test.clq.n_a);

  test.simulated.resize(sim.trials);
  parallel_for(sim.trials, [&](std::size_t t) {
    Rng rng(stream_seed(sim.seed, kGlobalStream, t));
    auto labels = relabel_global(points.labels(), rng);
    test.simulated[t] = (b_neighbor_count(table, labels, a_code, b_code) / n_a) / expected;
  });
  test.p = two_tailed_p(test.clq.value, test.simulated);
  return test;
}

CLQTest test_global_clq(const PointSet& points, std::string_view a, std::string_view b, std::size_t k,
                        const MetricConfig& metric, const SimulationConfig& sim) {
  require_pair(points, a, b);
  sim.validate();
  NeighborSearch search(points, metric);
  NeighborTable table(search, k);
  return test_global_clq(points, table, a, b, sim);
}

std::vector<double> simulate_local(const PointSet& points, const NeighborList& list,
                                   std::string_view b, KernelSpec kernel, const SimulationConfig& sim) {
  const auto n = points.size();
  const auto labels = points.labels();
  const auto b_code = *points.code_of(b);
  const auto origin = list.origin;
  const auto m = list.neighbors.size();

  // Free labels laid out with the ranked neighbors first, then every other
  // point in input order.
  std::vector<char> is_neighbor(n, 0);
  std::vector<CategoryCode> pool;
  pool.reserve(n - 1);
  for (const auto& nb : list.neighbors) {
    is_neighbor[nb.index] = 1;
    pool.push_back(labels[nb.index]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i != origin && !is_neighbor[i]) pool.push_back(labels[i]);
  }

  LocalKernel weights(list, kernel);
  const double expected = expected_b_share(points.count(b), n, points[origin].category == b);
  Rng rng(stream_seed(sim.seed, kLocalStream, static_cast<std::uint64_t>(points[origin].id)));
  std::vector<double> simulated(sim.trials);
  std::vector<std::size_t> swaps;
  swaps.reserve(m);
  for (std::size_t t = 0; t < sim.trials; ++t) {
    // Only the first m positions of the full shuffle reach the neighbor set;
    // later steps never touch them, so the remaining steps are skipped and
    // the partial shuffle undone afterwards.
    swaps.clear();
    shuffle_prefix(pool, m, rng, &swaps);
    simulated[t] = weights.share([&](std::size_t r) { return pool[r] == b_code; }) / expected;
    for (auto s = swaps.size(); s-- > 0;) std::swap(pool[s], pool[swaps[s]]);
  }
  return simulated;
}

std::vector<LCLQRecord> test_lclq(const PointSet& points, const NeighborTable& table,
                                  std::string_view a, std::string_view b, KernelSpec kernel,
                                  const SimulationConfig& sim, const Progress& progress) {
  sim.validate();
  auto records = lclq_all(points, table, a, b, kernel);
  ProgressReporter reporter(progress, records.size());
  parallel_for(records.size(), [&](std::size_t s) {
    auto& rec = records[s];
    auto simulated = simulate_local(points, table.list(rec.index), b, kernel, sim);
    auto p = two_tailed_p(rec.value, simulated);
    rec.p_value = p.value;
    rec.significant = p.value <= sim.alpha;
    reporter.tick();
  });
  return records;
}

std::vector<LCLQRecord> test_lclq(const PointSet& points, std::string_view a, std::string_view b,
                                  std::size_t k, const MetricConfig& metric, KernelSpec kernel,
                                  const SimulationConfig& sim, const Progress& progress) {
  require_pair(points, a, b);
  sim.validate();
  NeighborSearch search(points, metric);
  auto origins = points.indices_of(a);
  NeighborTable table(search, k, origins);
  return test_lclq(points, table, a, b, kernel, sim, progress);
}

}  // namespace colocq
