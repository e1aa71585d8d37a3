#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace fixtures {

colocq::PointSet csr(const std::vector<std::string>& names, const std::vector<std::size_t>& counts,
                     std::uint64_t seed, double side) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < names.size(); ++c) labels.insert(labels.end(), counts[c], names[c]);
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<colocq::SpatialPoint> pts;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double x = u(rng);
    double y = u(rng);
    pts.push_back({static_cast<colocq::PointId>(i), x, y, labels[i]});
  }
  return colocq::PointSet(std::move(pts));
}

colocq::PointSet shuffled_labels(const colocq::PointSet& points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> labels;
  for (const auto& p : points.points()) labels.push_back(p.category);
  std::shuffle(labels.begin(), labels.end(), rng);
  auto pts = points.points();
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i].category = labels[i];
  return colocq::PointSet(std::move(pts));
}

std::shared_ptr<const colocq::RoadNetwork> grid_network(std::size_t nx, std::size_t ny, double spacing,
                                                       double x0, double y0, double drop,
                                                       std::uint64_t seed) {
  std::vector<colocq::NetworkNode> nodes;
  auto id = [nx](std::size_t i, std::size_t j) { return static_cast<colocq::NodeId>(j * nx + i); };
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      nodes.push_back({id(i, j), x0 + spacing * static_cast<double>(i), y0 + spacing * static_cast<double>(j)});
  std::vector<colocq::EdgeSpec> edges;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      if (i + 1 < nx) edges.push_back({id(i, j), id(i + 1, j), std::nullopt});
      if (j + 1 < ny) edges.push_back({id(i, j), id(i, j + 1), std::nullopt});
    }
  if (drop > 0.0) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution remove(drop);
    std::vector<colocq::EdgeSpec> kept = edges;
    for (std::size_t e = edges.size(); e-- > 0;) {
      if (!remove(rng)) continue;
      auto trial = kept;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(e));
      if (colocq::RoadNetwork(nodes, trial).component_count() == 1) kept = std::move(trial);
    }
    edges = std::move(kept);
  }
  return std::make_shared<const colocq::RoadNetwork>(nodes, edges);
}

colocq::PointSet checkerboard(std::size_t side) {
  std::vector<colocq::SpatialPoint> pts;
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c)
      pts.push_back({static_cast<colocq::PointId>(r * side + c), static_cast<double>(c),
                     static_cast<double>(r), (r + c) % 2 == 0 ? "A" : "B"});
  return colocq::PointSet(std::move(pts));
}

colocq::PointSet two_clusters(std::size_t n_a, std::size_t n_b, double radius, double far,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<colocq::SpatialPoint> pts;
  auto disc = [&](double cx, const char* cat, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      double r = radius * std::sqrt(u(rng));
      double t = 2.0 * M_PI * u(rng);
      pts.push_back({static_cast<colocq::PointId>(pts.size()), cx + r * std::cos(t), r * std::sin(t), cat});
    }
  };
  disc(0.0, "A", n_a);
  disc(far, "B", n_b);
  return colocq::PointSet(std::move(pts));
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("colocq_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace fixtures
