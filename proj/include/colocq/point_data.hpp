#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace colocq {

using PointId = std::int64_t;

// Dense integer code of a category within one PointSet. Codes follow the
// lexicographic order of the category names.
using CategoryCode = std::uint32_t;

struct SpatialPoint {
  PointId id = 0;
  double x = 0.0;
  double y = 0.0;
  std::string category;
};

// Immutable, validated collection of categorized planar points.
//
// Construction checks that ids are unique, coordinates finite and categories
// non-empty; it throws InputError otherwise. Coincident points are allowed.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<SpatialPoint> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const SpatialPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<SpatialPoint>& points() const { return points_; }

  const std::map<std::string, std::size_t, std::less<>>& category_counts() const {
    return counts_;
  }
  std::size_t count(std::string_view category) const;
  bool has_category(std::string_view category) const { return counts_.contains(category); }

  // Category names indexed by CategoryCode.
  const std::vector<std::string>& categories() const { return names_; }
  std::optional<CategoryCode> code_of(std::string_view category) const;
  // Observed label of every point, parallel to points().
  std::span<const CategoryCode> labels() const { return labels_; }

  std::optional<std::size_t> index_of(PointId id) const;
  // Indices of every point with the given category, in input order.
  std::vector<std::size_t> indices_of(std::string_view category) const;

 private:
  std::vector<SpatialPoint> points_;
  std::map<std::string, std::size_t, std::less<>> counts_;
  std::vector<std::string> names_;
  std::vector<CategoryCode> labels_;
  std::unordered_map<PointId, std::size_t> index_by_id_;
};

// CSV with header `id,x,y,<category_field>`. The id column is optional; when
// absent ids are assigned from the 0-based row ordinal.
PointSet load_points_csv(std::istream& in, std::string_view category_field = "category",
                         std::string_view source_name = "<csv>");

// GeoJSON FeatureCollection of Point features. The category is read from
// properties[category_field]; ids come from the feature `id` member, an `id`
// property, or the 0-based feature ordinal, in that order.
PointSet load_points_geojson(std::istream& in, std::string_view category_field = "category",
                             std::string_view source_name = "<geojson>");

// Dispatches on extension: .geojson/.json read as GeoJSON, anything else as CSV.
PointSet load_points(const std::filesystem::path& path,
                     std::string_view category_field = "category");

void write_points_csv(std::ostream& out, const PointSet& points,
                      std::string_view category_field = "category");

}  // namespace colocq
