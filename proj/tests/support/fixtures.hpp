#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "colocq/point_data.hpp"
#include "colocq/road_network.hpp"

namespace fixtures {

// Uniform points in [0, side]^2. Labels are assigned by shuffling a vector
// holding exactly counts[c] copies of names[c].
colocq::PointSet csr(const std::vector<std::string>& names, const std::vector<std::size_t>& counts,
                     std::uint64_t seed, double side = 1000.0);

// Same geometry as `points`, labels permuted uniformly.
colocq::PointSet shuffled_labels(const colocq::PointSet& points, std::uint64_t seed);

// nx * ny nodes spaced `spacing` apart starting at (x0, y0), 4-connected.
// With `drop` in (0, 1) that fraction of edges is removed at random while
// keeping the graph connected.
std::shared_ptr<const colocq::RoadNetwork> grid_network(std::size_t nx, std::size_t ny, double spacing,
                                                       double x0 = 0.0, double y0 = 0.0,
                                                       double drop = 0.0, std::uint64_t seed = 0);

// side x side lattice with alternating A/B labels, unit spacing.
colocq::PointSet checkerboard(std::size_t side);

// n_a A points in a disc around (0, 0) and n_b B points around (far, 0).
colocq::PointSet two_clusters(std::size_t n_a, std::size_t n_b, double radius, double far,
                              std::uint64_t seed);

std::filesystem::path temp_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fixtures
