#include "colocq/point_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "colocq/csv.hpp"
#include "colocq/error.hpp"

namespace colocq {

PointSet::PointSet(std::vector<SpatialPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw InputError("point set is empty");
  index_by_id_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InputError("point " + std::to_string(p.id) + ": coordinates must be finite");
    }
    if (p.category.empty()) {
      throw InputError("point " + std::to_string(p.id) + ": empty category");
    }
    if (!index_by_id_.emplace(p.id, i).second) {
      throw InputError("duplicate point id " + std::to_string(p.id));
    }
    ++counts_[p.category];
  }
  names_.reserve(counts_.size());
  for (const auto& [name, n] : counts_) names_.push_back(name);
  labels_.resize(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) labels_[i] = *code_of(points_[i].category);
}

std::size_t PointSet::count(std::string_view category) const {
  auto it = counts_.find(category);
  return it == counts_.end() ? 0 : it->second;
}

std::optional<CategoryCode> PointSet::code_of(std::string_view category) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), category);
  if (it == names_.end() || *it != category) return std::nullopt;
  return static_cast<CategoryCode>(it - names_.begin());
}

std::optional<std::size_t> PointSet::index_of(PointId id) const {
  auto it = index_by_id_.find(id);
  if (it == index_by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> PointSet::indices_of(std::string_view category) const {
  std::vector<std::size_t> out;
  auto code = code_of(category);
  if (!code) return out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == *code) out.push_back(i);
  }
  return out;
}

PointSet load_points_csv(std::istream& in, std::string_view category_field,
                         std::string_view source_name) {
  csv::Reader reader(in, std::string(source_name));
  reader.read_header();
  auto id_col = reader.column("id");
  auto x_col = reader.require_column("x");
  auto y_col = reader.require_column("y");
  auto cat_col = reader.require_column(category_field);

  std::vector<SpatialPoint> points;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    SpatialPoint p;
    p.id = id_col ? reader.integer(fields, *id_col) : static_cast<PointId>(reader.row() - 1);
    p.x = reader.number(fields, x_col);
    p.y = reader.number(fields, y_col);
    p.category = fields[cat_col];
    if (p.category.empty()) {
      throw InputError(std::string(source_name) + ": row " + std::to_string(reader.row()) +
                       " (line " + std::to_string(reader.line()) + "): field '" +
                       std::string(category_field) + "': missing category");
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw InputError(std::string(source_name) + ": no data rows");
  return PointSet(std::move(points));
}

namespace {

std::string category_text(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number() || value.is_boolean()) return value.dump();
  return {};
}

}  // namespace

PointSet load_points_geojson(std::istream& in, std::string_view category_field,
                             std::string_view source_name) {
  const std::string src(source_name);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(src + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw InputError(src + ": expected a GeoJSON FeatureCollection");
  }

  std::vector<SpatialPoint> points;
  const auto& features = doc["features"];
  for (std::size_t f = 0; f < features.size(); ++f) {
    const auto& feature = features[f];
    auto where = src + ": feature " + std::to_string(f);
    if (!feature.is_object()) throw InputError(where + ": not an object");
    const auto& geometry = feature.contains("geometry") ? feature["geometry"] : nlohmann::json();
    if (!geometry.is_object() || geometry.value("type", "") != "Point") {
      throw InputError(where + ": field 'geometry': expected a Point");
    }
    const auto& coords = geometry.contains("coordinates") ? geometry["coordinates"] : nlohmann::json();
    if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() || !coords[1].is_number()) {
      throw InputError(where + ": field 'coordinates': expected [x, y] numbers");
    }
    const auto& props = feature.contains("properties") && feature["properties"].is_object()
                            ? feature["properties"]
                            : nlohmann::json::object();

    SpatialPoint p;
    p.x = coords[0].get<double>();
    p.y = coords[1].get<double>();
    if (feature.contains("id") && feature["id"].is_number_integer()) {
      p.id = feature["id"].get<PointId>();
    } else if (props.contains("id") && props["id"].is_number_integer()) {
      p.id = props["id"].get<PointId>();
    } else {
      p.id = static_cast<PointId>(f);
    }
    auto cat = props.find(std::string(category_field));
    p.category = cat == props.end() ? std::string{} : category_text(*cat);
    if (p.category.empty()) {
      throw InputError(where + ": field '" + std::string(category_field) + "': missing category");
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw InputError(src + ": no features");
  return PointSet(std::move(points));
}

PointSet load_points(const std::filesystem::path& path, std::string_view category_field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open points file: " + path.string());
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".geojson" || ext == ".json") return load_points_geojson(in, category_field, path.string());
  return load_points_csv(in, category_field, path.string());
}

void write_points_csv(std::ostream& out, const PointSet& points, std::string_view category_field) {
  out << "id,x,y," << csv::escape(category_field) << '\n';
  for (const auto& p : points.points()) {
    out << p.id << ',' << csv::format_number(p.x) << ',' << csv::format_number(p.y) << ','
        << csv::escape(p.category) << '\n';
  }
}

}  // namespace colocq
