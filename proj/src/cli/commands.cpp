#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>

#include "colocq/cli.hpp"
#include "colocq/csv.hpp"
#include "colocq/diagnostics.hpp"
#include "colocq/error.hpp"
#include "colocq/inference.hpp"
#include "colocq/parallel.hpp"
#include "colocq/road_network.hpp"
#include "output.hpp"

namespace colocq::cli {

using csv::format_number;

namespace {

PointSet load_input(const RunConfig& config) {
  return load_points(config.points, config.category_field);
}

std::shared_ptr<const RoadNetwork> load_road_network(const RunConfig& config, std::ostream& err) {
  auto net = std::make_shared<const RoadNetwork>(load_network(*config.network, config.network_nodes));
  for (const auto& w : net->warnings()) err << "warning: " << w << '\n';
  auto s = net->summary();
  if (!config.quiet) {
    err << "network: " << s.nodes << " nodes, " << s.edges << " edges, " << s.components
        << " component(s)\n";
  }
  return net;
}

MetricConfig metric_config(const RunConfig& config, MetricKind kind,
                           const std::shared_ptr<const RoadNetwork>& net) {
  MetricConfig m;
  m.kind = kind;
  if (kind == MetricKind::network) m.network = net;
  m.snap_warn_distance = config.snap_warn;
  return m;
}

void print_warnings(const NeighborSearch& search, std::ostream& err) {
  for (const auto& w : search.warnings()) err << "warning: " << w << '\n';
}

SimulationConfig simulation(const RunConfig& config) {
  return {config.permutations, config.seed.value_or(0), config.alpha};
}

double study_area(const RunConfig& config, const PointSet& points, std::ostream& err) {
  if (config.area) return *config.area;
  double area = bounding_box_area(points);
  err << "warning: study area taken from the point bounding box: " << format_number(area) << '\n';
  if (!(area > 0.0)) throw AnalysisError("bounding box of the points has zero area");
  return area;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

}  // namespace

std::string_view lclq_class(const LCLQRecord& record) {
  if (!record.p_value || !record.significant) return "insignificant";
  return record.value >= 1.0 ? "significant-high" : "significant-low";
}

void run_global(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto points = load_input(config);
  auto kind = *parse_metric(config.metric);
  auto net = kind == MetricKind::network ? load_road_network(config, err) : nullptr;
  NeighborSearch search(points, metric_config(config, kind, net));
  print_warnings(search, err);

  using Key = std::tuple<std::size_t, std::size_t, std::size_t>;  // (a, b, k) positions
  std::map<Key, std::string> rows;
  for (std::size_t ki = 0; ki < config.k.size(); ++ki) {
    NeighborTable table(search, config.k[ki]);
    for (std::size_t ai = 0; ai < config.a.size(); ++ai) {
      for (std::size_t bi = 0; bi < config.b.size(); ++bi) {
        const auto& a = config.a[ai];
        const auto& b = config.b[bi];
        CLQResult clq;
        std::optional<double> p;
        if (config.permutations > 0) {
          auto test = test_global_clq(points, table, a, b, simulation(config));
          clq = test.clq;
          p = test.p.value;
        } else {
          clq = global_clq(points, table, a, b);
        }
        std::ostringstream row;
        row << csv::escape(a) << ',' << csv::escape(b) << ',' << config.k[ki] << ','
            << to_string(kind) << ',' << format_number(clq.value) << ',' << optional_number(p)
            << ',' << clq.n_a << ',' << clq.n_b << ',' << clq.n_total << ','
            << config.permutations << ',' << (config.seed ? std::to_string(*config.seed) : std::string{}) << '\n';
        rows[{ai, bi, ki}] = row.str();
        if (!config.quiet) {
          err << "global-clq " << a << "->" << b << " k=" << config.k[ki] << ": "
              << format_number(clq.value) << (p ? " p=" + format_number(*p) : "") << '\n';
        }
      }
    }
  }

  std::string text = "a,b,k,metric,clq,p_value,n_a,n_b,n,M,seed\n";
  for (const auto& [key, row] : rows) text += row;
  write_checked(config.out, text, rows.size() + 1);
  write_sidecar(config, config.out);
  out << "wrote " << rows.size() << " rows to " << config.out.string() << '\n';
}

void run_lclq(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto points = load_input(config);
  auto kind = *parse_metric(config.metric);
  auto net = kind == MetricKind::network ? load_road_network(config, err) : nullptr;
  NeighborSearch search(points, metric_config(config, kind, net));
  print_warnings(search, err);
  const auto& a = config.a.front();
  const auto& b = config.b.front();
  require_pair(points, a, b);
  NeighborTable table(search, config.k.front(), points.indices_of(a));
  KernelSpec kernel{*parse_kernel(config.kernel)};

  std::vector<LCLQRecord> records;
  if (config.permutations > 0) {
    std::size_t step = 0;
    Progress progress = [&](std::size_t done, std::size_t total) {
      if (config.quiet) return;
      std::size_t decile = done * 10 / total;
      if (decile > step || done == total) {
        step = decile;
        err << "lclq: tested " << done << '/' << total << " points\n";
      }
    };
    records = test_lclq(points, table, a, b, kernel, simulation(config), progress);
  } else {
    records = lclq_all(points, table, a, b, kernel);
  }

  std::string text = "id,x,y,lclq,p_value,significant\n";
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  std::map<std::string_view, std::size_t> classes;
  for (const auto& r : records) {
    const auto& p = points[r.index];
    std::string sig = r.p_value ? (r.significant ? "1" : "0") : "";
    text += std::to_string(r.point_id) + ',' + format_number(p.x) + ',' + format_number(p.y) + ',' +
            format_number(r.value) + ',' + optional_number(r.p_value) + ',' + sig + '\n';
    ++classes[lclq_class(r)];

    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["id"] = r.point_id;
    f["geometry"] = {{"type", "Point"}, {"coordinates", {p.x, p.y}}};
    nlohmann::ordered_json props;
    props["id"] = r.point_id;
    props[config.category_field] = p.category;
    props["lclq"] = r.value;
    props["p_value"] = r.p_value ? nlohmann::ordered_json(*r.p_value) : nlohmann::ordered_json();
    props["significant"] = r.p_value ? nlohmann::ordered_json(r.significant) : nlohmann::ordered_json();
    props["class"] = std::string(lclq_class(r));
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  nlohmann::ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["metadata"] = metadata_json(config);
  doc["features"] = std::move(features);

  auto geojson_path = config.geojson.value_or(std::filesystem::path(config.out).replace_extension(".geojson"));
  write_checked(config.out, text, records.size() + 1);
  write_sidecar(config, config.out);
  std::string geojson_text = doc.dump(1) + "\n";
  write_checked(geojson_path, geojson_text,
                static_cast<std::size_t>(std::count(geojson_text.begin(), geojson_text.end(), '\n')));
  out << "wrote " << records.size() << " points to " << config.out.string() << " and "
      << geojson_path.string() << '\n';
  out << "significant-high=" << classes["significant-high"]
      << " significant-low=" << classes["significant-low"]
      << " insignificant=" << classes["insignificant"] << '\n';
}

void run_crossk(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto points = load_input(config);
  auto kind = *parse_metric(config.metric);
  auto net = kind == MetricKind::network ? load_road_network(config, err) : nullptr;
  double area = study_area(config, points, err);
  auto curve = cross_k(points, config.a.front(), config.b.front(), config.dmax, config.steps,
                       metric_config(config, kind, net), area, simulation(config));
  for (const auto& w : curve.warnings) err << "warning: " << w << '\n';

  std::string text = "distance,k_observed,env_low,env_high\n";
  for (std::size_t s = 0; s < curve.distances.size(); ++s) {
    text += format_number(curve.distances[s]) + ',' + format_number(curve.observed[s]) + ',' +
            format_number(curve.envelope_low[s]) + ',' + format_number(curve.envelope_high[s]) + '\n';
    if (!config.quiet) {
      auto band = curve.band(s);
      err << "distance " << format_number(curve.distances[s]) << ": "
          << (band == EnvelopeBand::above   ? "above envelope (colocation)"
              : band == EnvelopeBand::below ? "below envelope (dispersion)"
                                            : "within envelope")
          << '\n';
    }
  }
  write_checked(config.out, text, curve.distances.size() + 1);
  write_sidecar(config, config.out);
  out << "within envelope at " << curve.steps_within() << " of " << curve.distances.size()
      << " steps; wrote " << config.out.string() << '\n';
}

void run_nni(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto points = load_input(config);
  double area = study_area(config, points, err);
  auto r = config.a.empty() ? nni(points, area) : nni(points, config.a.front(), area);
  out << "n=" << r.n << " area=" << format_number(r.area)
      << " mean_distance=" << format_number(r.mean_distance)
      << " expected_distance=" << format_number(r.expected_distance)
      << " index=" << format_number(r.index) << " z=" << format_number(r.z_score) << '\n';
  if (!config.out.empty()) {
    std::string text = "n,area,mean_distance,expected_distance,index,z_score\n";
    text += std::to_string(r.n) + ',' + format_number(r.area) + ',' + format_number(r.mean_distance) +
            ',' + format_number(r.expected_distance) + ',' + format_number(r.index) + ',' +
            format_number(r.z_score) + '\n';
    write_checked(config.out, text, 2);
    write_sidecar(config, config.out);
  }
}

void run_compare_metrics(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto points = load_input(config);
  auto net = load_road_network(config, err);
  const auto& a = config.a.front();
  const auto& b = config.b.front();
  require_pair(points, a, b);
  KernelSpec kernel{*parse_kernel(config.kernel)};
  auto origins = points.indices_of(a);

  NeighborSearch euclid(points, metric_config(config, MetricKind::euclidean, net));
  NeighborSearch network(points, metric_config(config, MetricKind::network, net));
  print_warnings(network, err);
  auto by_euclid = lclq_all(points, NeighborTable(euclid, config.k.front(), origins), a, b, kernel);
  auto by_network = lclq_all(points, NeighborTable(network, config.k.front(), origins), a, b, kernel);

  std::vector<double> ev, nv;
  std::string text = "id,x,y,lclq_euclidean,lclq_network,delta\n";
  for (std::size_t i = 0; i < by_euclid.size(); ++i) {
    const auto& p = points[by_euclid[i].index];
    ev.push_back(by_euclid[i].value);
    nv.push_back(by_network[i].value);
    text += std::to_string(p.id) + ',' + format_number(p.x) + ',' + format_number(p.y) + ',' +
            format_number(ev.back()) + ',' + format_number(nv.back()) + ',' +
            format_number(nv.back() - ev.back()) + '\n';
  }
  double r = ev.size() >= 2 ? pearson_correlation(ev, nv) : std::nan("");
  write_checked(config.out, text, by_euclid.size() + 1);
  write_sidecar(config, config.out);
  out << "n=" << ev.size() << " pearson_r=" << format_number(r) << '\n';
}

namespace {

void add_shared(CLI::App* sub, RunConfig& c, std::string& points, std::string& network,
                std::string& nodes, std::string& out_path, std::uint64_t& seed) {
  sub->add_option("--points", points, "Point file (CSV id,x,y,<category> or GeoJSON)")->required();
  sub->add_option("--category-field", c.category_field, "Category column or property")
      ->capture_default_str();
  sub->add_option("--metric", c.metric, "euclidean or network")->capture_default_str();
  sub->add_option("--network", network, "Road network (GeoJSON lines or edge CSV)");
  sub->add_option("--network-nodes", nodes, "Node table for an edge CSV network");
  sub->add_option("--snap-warn", c.snap_warn, "Warn when a point snaps farther than this (m)")
      ->capture_default_str();
  sub->add_option("--seed", seed, "Master random seed (drawn and printed when absent)");
  sub->add_option("--out", out_path, "Output path");
  sub->add_option("--threads", c.threads, "Worker threads (0 = all)")->configurable(false);
  sub->add_flag("--quiet", c.quiet, "Suppress progress messages")->configurable(false);
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point colocation analysis: colocation quotients, local indicators with "
               "Monte Carlo tests, cross K and nearest neighbor index"};
  app.set_version_flag("--version", std::string(kToolName) + ' ' + std::string(kToolVersion));
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML file (keys under [<command>])");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();

  RunConfig c;
  std::string points, network, nodes, out_path, geojson;
  std::uint64_t seed = 0;
  std::vector<std::size_t> k;
  std::size_t permutations = 0;
  double area = 0.0;

  struct Command {
    std::string name;
    std::string help;
    std::vector<std::size_t> default_k;
    std::size_t default_permutations;
  };
  const std::vector<Command> commands = {
      {"global-clq", "Global colocation quotients for every (a, b, k) combination", {1}, 999},
      {"lclq", "Local colocation quotients with restricted random labeling tests", {10}, 999},
      {"cross-k", "Cross K function with simulation envelopes", {}, 99},
      {"nni", "Nearest neighbor index", {}, 0},
      {"compare-metrics", "Correlate Euclidean and network local quotients", {10}, 0},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    subs[cmd.name] = sub;
    add_shared(sub, c, points, network, nodes, out_path, seed);
    sub->add_option("--a", c.a, cmd.name == "nni" ? "Restrict to one category" : "Category A");
    if (cmd.name != "nni") sub->add_option("--b", c.b, "Category B");
    if (!cmd.default_k.empty()) {
      sub->add_option("--k", k, "Neighbor rank (adaptive bandwidth)");
      sub->add_option("--kernel", c.kernel, "gaussian or box")->capture_default_str();
    }
    if (cmd.name == "global-clq" || cmd.name == "lclq" || cmd.name == "cross-k") {
      sub->add_option("--permutations", permutations, "Monte Carlo trials");
      sub->add_option("--alpha", c.alpha, "Significance level")->capture_default_str();
    }
    if (cmd.name == "lclq") sub->add_option("--geojson", geojson, "GeoJSON output path");
    if (cmd.name == "cross-k") {
      sub->add_option("--dmax", c.dmax, "Largest distance of the grid (m)")->required();
      sub->add_option("--steps", c.steps, "Grid size")->capture_default_str();
    }
    if (cmd.name == "cross-k" || cmd.name == "nni") {
      sub->add_option("--area", area, "Study area (m^2)");
      sub->add_flag("--area-bbox", c.area_bbox, "Use the bounding box of the points as area");
    }
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kToolName << ' ' << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  const Command* cmd = nullptr;
  for (const auto& candidate : commands) {
    if (subs[candidate.name]->parsed()) cmd = &candidate;
  }
  auto* sub = subs[cmd->name];
  c.command = cmd->name;
  c.points = points;
  if (!network.empty()) c.network = network;
  if (!nodes.empty()) c.network_nodes = nodes;
  c.out = out_path;
  if (!geojson.empty()) c.geojson = geojson;
  c.k = k.empty() ? cmd->default_k : k;
  auto given = [sub](const char* name) {
    auto* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  c.permutations = given("--permutations") ? permutations : cmd->default_permutations;
  if (given("--area")) c.area = area;
  if (given("--seed")) {
    c.seed = seed;
  } else if (cmd->default_permutations > 0 && c.permutations > 0) {
    c.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    err << "seed: " << *c.seed << '\n';
  }

  try {
    c.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  set_thread_count(c.threads);
  try {
    if (c.command == "global-clq") run_global(c, out, err);
    else if (c.command == "lclq") run_lclq(c, out, err);
    else if (c.command == "cross-k") run_crossk(c, out, err);
    else if (c.command == "nni") run_nni(c, out, err);
    else run_compare_metrics(c, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAnalysis;
  }
  return kExitOk;
}

}  // namespace colocq::cli
