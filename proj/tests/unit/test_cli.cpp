#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "colocq/cli.hpp"
#include "colocq/point_data.hpp"
#include "fixtures.hpp"

using namespace colocq;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "colocq");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::filesystem::path write_points(const std::filesystem::path& dir, const PointSet& pts) {
  auto path = dir / "points.csv";
  std::ofstream out(path);
  write_points_csv(out, pts);
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("batch of a x b x k rows, byte identical reruns") {
  auto dir = fixtures::temp_dir("batch");
  auto points = write_points(dir, fixtures::csr({"A", "B", "C", "D"}, {40, 30, 20, 10}, 1, 500.0));
  auto args = [&](const std::string& out, const std::string& threads) {
    return std::vector<std::string>{"global-clq", "--points", points.string(), "--a", "A", "B", "--b", "C", "D",
                                    "--k", "1", "10", "--permutations", "99", "--seed", "5", "--out",
                                    (dir / out).string(), "--threads", threads, "--quiet"};
  };
  REQUIRE(run(args("one.csv", "1")).code == 0);
  REQUIRE(run(args("two.csv", "3")).code == 0);
  auto one = fixtures::read_file(dir / "one.csv");
  CHECK(count_lines(one) == 9);
  CHECK(one.rfind("a,b,k,metric,clq,p_value,n_a,n_b,n,M,seed\n", 0) == 0);
  CHECK(one == fixtures::read_file(dir / "two.csv"));
  CHECK(std::filesystem::exists(dir / "one.csv.run.toml"));
}

TEST_CASE("config sidecar replays the run") {
  auto dir = fixtures::temp_dir("replay");
  auto points = write_points(dir, fixtures::csr({"A", "B"}, {40, 30}, 2, 500.0));
  REQUIRE(run({"global-clq", "--points", points.string(), "--a", "A", "--b", "B", "--k", "3", "--seed", "9",
               "--permutations", "49", "--out", (dir / "first.csv").string(), "--quiet"}).code == 0);
  REQUIRE(run({"global-clq", "--config", (dir / "first.csv.run.toml").string(), "--out",
               (dir / "second.csv").string(), "--quiet"}).code == 0);
  CHECK(fixtures::read_file(dir / "first.csv") == fixtures::read_file(dir / "second.csv"));
}

TEST_CASE("missing input file exits 2 naming the path") {
  auto r = run({"global-clq", "--points", "/no/such/points.csv", "--a", "A", "--b", "B", "--out", "/tmp/x.csv"});
  CHECK(r.code == 2);
  CHECK(r.err.find("/no/such/points.csv") != std::string::npos);
}

TEST_CASE("config errors exit 2") {
  auto dir = fixtures::temp_dir("config");
  auto points = write_points(dir, fixtures::csr({"A", "B"}, {10, 10}, 2, 5.0));
  CHECK(run({"global-clq", "--points", points.string(), "--a", "A", "--b", "B", "--out", "x.csv", "--metric", "taxicab"}).code == 2);
  CHECK(run({"global-clq", "--points", points.string(), "--a", "A", "--b", "B", "--out", "x.csv", "--metric", "network"}).code == 2);
  CHECK(run({"lclq", "--points", points.string(), "--a", "A", "--b", "B", "--permutations", "5", "--out", "x.csv"}).code == 2);
  CHECK(run({"cross-k", "--points", points.string(), "--a", "A", "--b", "B", "--dmax", "1", "--out", "x.csv"}).code == 2);
  CHECK(run({"nosuch"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("absent category is an input problem") {
  auto dir = fixtures::temp_dir("absent");
  auto points = write_points(dir, fixtures::csr({"A", "B"}, {10, 10}, 2, 5.0));
  auto r = run({"lclq", "--points", points.string(), "--a", "A", "--b", "Z", "--seed", "1", "--out", (dir / "l.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("Z") != std::string::npos);
}

TEST_CASE("lclq writes one feature per A point with consistent classes") {
  auto dir = fixtures::temp_dir("lclq");
  auto pts = fixtures::csr({"A", "B"}, {100, 80}, 3, 500.0);
  auto points = write_points(dir, pts);
  auto r = run({"lclq", "--points", points.string(), "--a", "A", "--b", "B", "--k", "8", "--permutations", "99",
                "--seed", "4", "--out", (dir / "local.csv").string(), "--quiet"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(fixtures::read_file(dir / "local.geojson"));
  REQUIRE(doc["features"].size() == 100);
  CHECK(doc["metadata"]["seed"] == 4);

  std::istringstream csv(fixtures::read_file(dir / "local.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "id,x,y,lclq,p_value,significant");
  std::map<std::string, int> classes;
  std::size_t row = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    REQUIRE(f.size() == 6);
    const auto& feature = doc["features"][row++];
    CHECK(std::to_string(feature["properties"]["id"].get<long>()) == f[0]);
    CHECK(feature["geometry"]["coordinates"][0].get<double>() == std::stod(f[1]));
    CHECK(feature["properties"]["lclq"].get<double>() == std::stod(f[3]));
    std::string cls = f[5] == "0" ? "insignificant" : std::stod(f[3]) >= 1.0 ? "significant-high" : "significant-low";
    CHECK(feature["properties"]["class"] == cls);
    ++classes[cls];
  }
  CHECK(row == 100);
  std::ostringstream summary;
  summary << "significant-high=" << classes["significant-high"] << " significant-low=" << classes["significant-low"]
          << " insignificant=" << classes["insignificant"];
  CHECK(r.out.find(summary.str()) != std::string::npos);

  // The GeoJSON output is itself a valid point input.
  auto back = load_points(dir / "local.geojson");
  CHECK(back.size() == 100);
  CHECK(back.count("A") == 100);
}

TEST_CASE("cross-k curve has steps rows and bands agree with the log") {
  auto dir = fixtures::temp_dir("crossk");
  auto points = write_points(dir, fixtures::csr({"A", "B"}, {60, 60}, 5, 100.0));
  auto r = run({"cross-k", "--points", points.string(), "--a", "A", "--b", "B", "--dmax", "30", "--steps", "7",
                "--area", "10000", "--seed", "2", "--out", (dir / "k.csv").string()});
  REQUIRE(r.code == 0);
  std::istringstream csv(fixtures::read_file(dir / "k.csv"));
  std::string line;
  std::getline(csv, line);
  std::size_t rows = 0, within = 0;
  while (std::getline(csv, line)) {
    ++rows;
    double d, k, lo, hi;
    char c;
    std::istringstream(line) >> d >> c >> k >> c >> lo >> c >> hi;
    within += lo <= k && k <= hi;
  }
  CHECK(rows == 7);
  std::size_t logged = 0;
  for (auto pos = r.err.find("within envelope"); pos != std::string::npos; pos = r.err.find("within envelope", pos + 1)) ++logged;
  CHECK(logged == within);
  CHECK(r.out.find("within envelope at " + std::to_string(within) + " of 7") != std::string::npos);
}

TEST_CASE("nni prints the four corner index") {
  auto r = run({"nni", "--points", COLOCQ_TEST_DATA "/four_corners.csv", "--area", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("index=4 ") != std::string::npos);
  CHECK(r.err.find("seed") == std::string::npos);
}

TEST_CASE("compare-metrics on a dense grid agrees with itself closely") {
  auto dir = fixtures::temp_dir("compare");
  auto pts = fixtures::csr({"A", "B"}, {80, 80}, 6, 200.0);
  auto points = write_points(dir, pts);
  auto edges = dir / "edges.csv";
  auto nodes = dir / "nodes.csv";
  {
    std::ostringstream e, n;
    e << "from_id,to_id,length\n";
    n << "node_id,x,y\n";
    const int m = 101;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        int id = j * m + i;
        n << id << ',' << 2 * i << ',' << 2 * j << '\n';
        if (i + 1 < m) e << id << ',' << id + 1 << ",\n";
        if (j + 1 < m) e << id << ',' << id + m << ",\n";
      }
    fixtures::write_file(edges, e.str());
    fixtures::write_file(nodes, n.str());
  }
  auto r = run({"compare-metrics", "--points", points.string(), "--a", "A", "--b", "B", "--k", "10", "--network",
                edges.string(), "--network-nodes", nodes.string(), "--out", (dir / "cmp.csv").string(), "--quiet"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(fixtures::read_file(dir / "cmp.csv")) == 81);
  auto pos = r.out.find("pearson_r=");
  REQUIRE(pos != std::string::npos);
  double corr = std::stod(r.out.substr(pos + 10));
  CHECK(corr > 0.8);
  CHECK(corr <= 1.0);

  // Without a node table the edge CSV cannot be placed.
  CHECK(run({"compare-metrics", "--points", points.string(), "--a", "A", "--b", "B", "--network", edges.string(),
             "--out", (dir / "x.csv").string()}).code == 2);
}

}
