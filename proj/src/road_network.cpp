#include "colocq/road_network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "colocq/csv.hpp"
#include "colocq/error.hpp"

namespace colocq {

namespace {

double chord(const NetworkNode& a, const NetworkNode& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

}  // namespace

RoadNetwork::RoadNetwork(std::vector<NetworkNode> nodes, const std::vector<EdgeSpec>& edges)
    : nodes_(std::move(nodes)) {
  if (edges.empty()) throw InputError("road network has no edges");

  sorted_ids_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (!std::isfinite(n.x) || !std::isfinite(n.y)) {
      throw InputError("node " + std::to_string(n.id) + ": coordinates must be finite");
    }
    sorted_ids_.emplace_back(n.id, i);
  }
  std::sort(sorted_ids_.begin(), sorted_ids_.end());
  for (std::size_t i = 1; i < sorted_ids_.size(); ++i) {
    if (sorted_ids_[i].first == sorted_ids_[i - 1].first) {
      throw InputError("duplicate node id " + std::to_string(sorted_ids_[i].first));
    }
  }

  edges_.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& spec = edges[e];
    auto where = "edge " + std::to_string(e) + " (" + std::to_string(spec.from) + "-" +
                 std::to_string(spec.to) + ")";
    auto a = node_index(spec.from);
    auto b = node_index(spec.to);
    if (!a) throw InputError(where + ": dangling reference to node " + std::to_string(spec.from));
    if (!b) throw InputError(where + ": dangling reference to node " + std::to_string(spec.to));
    if (*a == *b) throw InputError(where + ": self-loop");
    double straight = chord(nodes_[*a], nodes_[*b]);
    double length = spec.length.value_or(straight);
    if (!std::isfinite(length) || length <= 0.0) {
      throw InputError(where + ": length must be positive, got " + csv::format_number(length));
    }
    if (spec.length) {
      if (length < 0.9 * straight) {
        warnings_.push_back(where + ": length " + csv::format_number(length) +
                            " is shorter than the chord " + csv::format_number(straight));
      } else if (length > 1.1 * straight) {
        warnings_.push_back(where + ": length " + csv::format_number(length) +
                            " exceeds the chord " + csv::format_number(straight) +
                            " by more than 10% (curved segment?)");
      }
    }
    edges_.push_back({*a, *b, length});
  }

  // Compressed adjacency.
  offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.a + 1];
    ++offsets_[e.b + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidence_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    incidence_[fill[edges_[e].a]++] = {e, edges_[e].b};
    incidence_[fill[edges_[e].b]++] = {e, edges_[e].a};
  }

  // Connected components by iterative DFS; isolated nodes are their own component.
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  component_.assign(nodes_.size(), unset);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < nodes_.size(); ++start) {
    if (component_[start] != unset) continue;
    component_[start] = component_count_;
    stack.push_back(start);
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (const auto& inc : incident(u)) {
        if (component_[inc.neighbor] == unset) {
          component_[inc.neighbor] = component_count_;
          stack.push_back(inc.neighbor);
        }
      }
    }
    ++component_count_;
  }
}

std::optional<std::size_t> RoadNetwork::node_index(NodeId id) const {
  auto it = std::lower_bound(sorted_ids_.begin(), sorted_ids_.end(),
                             std::pair<NodeId, std::size_t>{id, 0});
  if (it == sorted_ids_.end() || it->first != id) return std::nullopt;
  return it->second;
}

RoadNetwork load_network_csv(std::istream& edges, std::istream& nodes, std::string_view source_name) {
  const std::string src(source_name);
  csv::Reader node_reader(nodes, src + " (nodes)");
  node_reader.read_header();
  auto id_col = node_reader.require_column("node_id");
  auto x_col = node_reader.require_column("x");
  auto y_col = node_reader.require_column("y");
  std::vector<NetworkNode> node_list;
  std::vector<std::string> fields;
  while (node_reader.next(fields)) {
    node_list.push_back({node_reader.integer(fields, id_col), node_reader.number(fields, x_col),
                         node_reader.number(fields, y_col)});
  }
  if (node_list.empty()) throw InputError(src + " (nodes): no data rows");

  csv::Reader edge_reader(edges, src + " (edges)");
  edge_reader.read_header();
  auto from_col = edge_reader.require_column("from_id");
  auto to_col = edge_reader.require_column("to_id");
  auto len_col = edge_reader.column("length");
  std::vector<EdgeSpec> specs;
  while (edge_reader.next(fields)) {
    EdgeSpec spec{edge_reader.integer(fields, from_col), edge_reader.integer(fields, to_col), {}};
    if (len_col && !fields[*len_col].empty()) spec.length = edge_reader.number(fields, *len_col);
    specs.push_back(spec);
  }
  if (specs.empty()) throw InputError(src + " (edges): no data rows");
  return RoadNetwork(std::move(node_list), specs);
}

RoadNetwork load_network_geojson(std::istream& in, std::string_view source_name) {
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

  std::vector<NetworkNode> nodes;
  std::map<std::pair<double, double>, NodeId> node_at;
  auto node_for = [&](double x, double y) {
    auto [it, inserted] = node_at.try_emplace({x, y}, static_cast<NodeId>(nodes.size()));
    if (inserted) nodes.push_back({it->second, x, y});
    return it->second;
  };

  std::vector<EdgeSpec> specs;
  const auto& features = doc["features"];
  for (std::size_t f = 0; f < features.size(); ++f) {
    const auto& feature = features[f];
    auto where = src + ": feature " + std::to_string(f);
    if (!feature.is_object() || !feature.contains("geometry") || !feature["geometry"].is_object()) {
      throw InputError(where + ": missing geometry");
    }
    const auto& geometry = feature["geometry"];
    auto type = geometry.value("type", "");
    std::vector<const nlohmann::json*> lines;
    if (type == "LineString") {
      lines.push_back(&geometry["coordinates"]);
    } else if (type == "MultiLineString") {
      for (const auto& part : geometry["coordinates"]) lines.push_back(&part);
    } else {
      throw InputError(where + ": field 'geometry': expected LineString or MultiLineString");
    }

    std::optional<double> total_length;
    if (feature.contains("properties") && feature["properties"].is_object()) {
      const auto& props = feature["properties"];
      if (props.contains("length") && props["length"].is_number()) {
        total_length = props["length"].get<double>();
      }
    }

    struct Segment {
      NodeId a, b;
      double chord;
    };
    std::vector<Segment> segments;
    for (const auto* line : lines) {
      if (!line->is_array() || line->size() < 2) {
        throw InputError(where + ": field 'coordinates': a line needs at least two vertices");
      }
      std::optional<std::pair<double, double>> prev;
      for (const auto& v : *line) {
        if (!v.is_array() || v.size() < 2 || !v[0].is_number() || !v[1].is_number()) {
          throw InputError(where + ": field 'coordinates': expected [x, y] numbers");
        }
        std::pair<double, double> cur{v[0].get<double>(), v[1].get<double>()};
        if (prev) {
          double c = std::hypot(cur.first - prev->first, cur.second - prev->second);
          if (c == 0.0) throw InputError(where + ": zero-length segment");
          segments.push_back({node_for(prev->first, prev->second), node_for(cur.first, cur.second), c});
        }
        prev = cur;
      }
    }
    double chord_sum = 0.0;
    for (const auto& s : segments) chord_sum += s.chord;
    for (const auto& s : segments) {
      EdgeSpec spec{s.a, s.b, {}};
      if (total_length) spec.length = *total_length * (s.chord / chord_sum);
      specs.push_back(spec);
    }
  }
  if (specs.empty()) throw InputError(src + ": no line features");
  return RoadNetwork(std::move(nodes), specs);
}

RoadNetwork load_network(const std::filesystem::path& path,
                         const std::optional<std::filesystem::path>& nodes_path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open network file: " + path.string());
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".geojson" || ext == ".json") return load_network_geojson(in, path.string());
  if (!nodes_path) {
    throw InputError("network edge table " + path.string() + " requires a node table");
  }
  std::ifstream nodes(*nodes_path, std::ios::binary);
  if (!nodes) throw InputError("cannot open network node file: " + nodes_path->string());
  return load_network_csv(in, nodes, path.string());
}

namespace {

struct Projection {
  double distance;
  double offset;
};

Projection project(double x, double y, const RoadNetwork& net, std::size_t e) {
  const auto& edge = net.edges()[e];
  const auto& a = net.nodes()[edge.a];
  const auto& b = net.nodes()[edge.b];
  double dx = b.x - a.x, dy = b.y - a.y;
  double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((x - a.x) * dx + (y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  double px = a.x + t * dx, py = a.y + t * dy;
  return {std::hypot(x - px, y - py), t * edge.length};
}

// Uniform grid over edge bounding boxes.
class EdgeGrid {
 public:
  explicit EdgeGrid(const RoadNetwork& net) : net_(net) {
    const auto& nodes = net.nodes();
    min_x_ = min_y_ = std::numeric_limits<double>::infinity();
    double max_x = -min_x_, max_y = -min_y_;
    for (const auto& e : net.edges()) {
      for (auto n : {e.a, e.b}) {
        min_x_ = std::min(min_x_, nodes[n].x);
        min_y_ = std::min(min_y_, nodes[n].y);
        max_x = std::max(max_x, nodes[n].x);
        max_y = std::max(max_y, nodes[n].y);
      }
    }
    double extent = std::max(max_x - min_x_, max_y - min_y_);
    double target = std::max(1.0, std::sqrt(static_cast<double>(net.edges().size())));
    cell_ = extent > 0.0 ? extent / target : 1.0;
    nx_ = static_cast<long>((max_x - min_x_) / cell_) + 1;
    ny_ = static_cast<long>((max_y - min_y_) / cell_) + 1;
    cells_.resize(static_cast<std::size_t>(nx_ * ny_));
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
      const auto& edge = net.edges()[e];
      const auto& a = nodes[edge.a];
      const auto& b = nodes[edge.b];
      long x0 = cx(std::min(a.x, b.x)), x1 = cx(std::max(a.x, b.x));
      long y0 = cy(std::min(a.y, b.y)), y1 = cy(std::max(a.y, b.y));
      for (long j = y0; j <= y1; ++j)
        for (long i = x0; i <= x1; ++i) cells_[static_cast<std::size_t>(j * nx_ + i)].push_back(e);
    }
  }

  SnappedPoint snap(double x, double y) const {
    long ci = cx(x), cj = cy(y);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_edge = 0;
    double best_offset = 0.0;
    long max_ring = std::max(nx_, ny_);
    for (long r = 0; r <= max_ring; ++r) {
      if (best < static_cast<double>(r - 1) * cell_) break;
      for (long j = cj - r; j <= cj + r; ++j) {
        if (j < 0 || j >= ny_) continue;
        for (long i = ci - r; i <= ci + r; ++i) {
          if (i < 0 || i >= nx_) continue;
          if (std::max(std::labs(i - ci), std::labs(j - cj)) != r) continue;
          for (auto e : cells_[static_cast<std::size_t>(j * nx_ + i)]) {
            auto p = project(x, y, net_, e);
            if (p.distance < best || (p.distance == best && e < best_edge)) {
              best = p.distance;
              best_edge = e;
              best_offset = p.offset;
            }
          }
        }
      }
    }
    return {0, best_edge, best_offset, best};
  }

 private:
  long cx(double x) const { return std::clamp(static_cast<long>((x - min_x_) / cell_), 0L, nx_ - 1); }
  long cy(double y) const { return std::clamp(static_cast<long>((y - min_y_) / cell_), 0L, ny_ - 1); }

  const RoadNetwork& net_;
  double min_x_, min_y_, cell_;
  long nx_, ny_;
  std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace

SnappedPoint snap_location(double x, double y, const RoadNetwork& net) {
  SnappedPoint best{0, 0, 0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    auto p = project(x, y, net, e);
    if (p.distance < best.snap_distance) best = {0, e, p.offset, p.distance};
  }
  return best;
}

std::vector<SnappedPoint> snap_points(const PointSet& points, const RoadNetwork& net,
                                      double warn_distance, std::vector<std::string>* warnings) {
  EdgeGrid grid(net);
  std::vector<SnappedPoint> out;
  out.reserve(points.size());
  for (const auto& p : points.points()) {
    auto s = grid.snap(p.x, p.y);
    s.point_id = p.id;
    if (warnings && s.snap_distance > warn_distance) {
      warnings->push_back("point " + std::to_string(p.id) + " is " +
                          csv::format_number(s.snap_distance) + " m from the network");
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace colocq
