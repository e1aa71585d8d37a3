#include <algorithm>
#include <cmath>
#include <sstream>

#include "colocq/cli.hpp"
#include "colocq/csv.hpp"
#include "colocq/metric.hpp"

namespace colocq::cli {

namespace {

bool is_command(std::string_view c) {
  return c == "global-clq" || c == "lclq" || c == "cross-k" || c == "nni" || c == "compare-metrics";
}

void require_file(const std::filesystem::path& path, std::string_view what) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ConfigError(std::string(what) + " not found: " + path.string());
  }
}

void require_single(const std::vector<std::string>& values, std::string_view flag, bool optional = false) {
  if (values.size() > 1 || (!optional && values.empty())) {
    throw ConfigError("--" + std::string(flag) + " takes exactly one value for this command");
  }
}

std::string toml_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string string_list(const std::vector<std::string>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + toml_string(values[i]);
  return out + "]";
}

}  // namespace

void RunConfig::validate() const {
  if (!is_command(command)) throw ConfigError("unknown command '" + command + "'");
  require_file(points, "points file");
  if (network) require_file(*network, "network file");
  if (network_nodes) require_file(*network_nodes, "network node file");
  if (category_field.empty()) throw ConfigError("--category-field must not be empty");

  auto metric_kind = parse_metric(metric);
  if (!metric_kind) throw ConfigError("--metric must be euclidean or network, got '" + metric + "'");
  if (!parse_kernel(kernel)) throw ConfigError("--kernel must be gaussian or box, got '" + kernel + "'");
  if ((*metric_kind == MetricKind::network || command == "compare-metrics") && !network) {
    throw ConfigError(command + ": the network metric requires --network");
  }
  if (network) {
    auto ext = network->extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext != ".geojson" && ext != ".json" && !network_nodes) {
      throw ConfigError("edge table " + network->string() + " requires --network-nodes");
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");
  if (!(snap_warn >= 0.0)) throw ConfigError("--snap-warn must be non-negative");

  const bool uses_k = command == "global-clq" || command == "lclq" || command == "compare-metrics";
  if (uses_k) {
    if (k.empty()) throw ConfigError("--k is required");
    for (auto v : k) {
      if (v < 1) throw ConfigError("--k must be at least 1");
    }
  }
  if (command == "global-clq" || command == "lclq") {
    if (permutations != 0 && permutations < 19) {
      throw ConfigError("--permutations must be 0 (no test) or at least 19");
    }
  }
  if (command == "cross-k" && permutations < 19) {
    throw ConfigError("--permutations must be at least 19 for simulation envelopes");
  }
  if (command != "nni" && out.empty()) throw ConfigError("--out is required");

  if (command == "global-clq") {
    if (a.empty() || b.empty()) throw ConfigError("--a and --b are required");
  } else if (command == "lclq" || command == "compare-metrics" || command == "cross-k") {
    require_single(a, "a");
    require_single(b, "b");
    if (command != "cross-k" && k.size() != 1) {
      throw ConfigError("--k takes exactly one value for this command");
    }
  } else if (command == "nni") {
    require_single(a, "a", true);
  }

  if (command == "cross-k" || command == "nni") {
    if (area.has_value() == area_bbox) throw ConfigError("give exactly one of --area and --area-bbox");
    if (area && !(*area > 0.0 && std::isfinite(*area))) throw ConfigError("--area must be positive");
  }
  if (command == "cross-k") {
    if (!(dmax > 0.0 && std::isfinite(dmax))) throw ConfigError("--dmax must be positive");
    if (steps < 2) throw ConfigError("--steps must be at least 2");
  }
}

std::string RunConfig::to_config_text() const {
  std::ostringstream s;
  s << "# " << kToolName << ' ' << kToolVersion << ' ' << command << " run configuration\n";
  s << "# replay: " << kToolName << ' ' << command << " --config <this file>\n";
  s << "[" << command << "]\n";
  s << "points = " << toml_string(points.string()) << '\n';
  s << "category-field = " << toml_string(category_field) << '\n';
  if (!a.empty()) s << "a = " << string_list(a) << '\n';
  if (!b.empty()) s << "b = " << string_list(b) << '\n';
  if (command == "global-clq" || command == "lclq" || command == "compare-metrics") {
    s << "k = [";
    for (std::size_t i = 0; i < k.size(); ++i) s << (i ? ", " : "") << k[i];
    s << "]\n";
    s << "kernel = " << toml_string(kernel) << '\n';
  }
  s << "metric = " << toml_string(metric) << '\n';
  if (network) s << "network = " << toml_string(network->string()) << '\n';
  if (network_nodes) s << "network-nodes = " << toml_string(network_nodes->string()) << '\n';
  s << "snap-warn = " << csv::format_number(snap_warn) << '\n';
  if (command != "nni" && command != "compare-metrics") {
    s << "permutations = " << permutations << '\n';
    s << "alpha = " << csv::format_number(alpha) << '\n';
  }
  if (seed) s << "seed = " << *seed << '\n';
  if (!out.empty()) s << "out = " << toml_string(out.string()) << '\n';
  if (geojson) s << "geojson = " << toml_string(geojson->string()) << '\n';
  if (command == "cross-k") {
    s << "dmax = " << csv::format_number(dmax) << '\n';
    s << "steps = " << steps << '\n';
  }
  if (command == "cross-k" || command == "nni") {
    if (area) s << "area = " << csv::format_number(*area) << '\n';
    if (area_bbox) s << "area-bbox = true\n";
  }
  return s.str();
}

}  // namespace colocq::cli
