#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "colocq/colocation.hpp"
#include "colocq/diagnostics.hpp"

namespace colocq::cli {

inline constexpr std::string_view kToolName = "colocq";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysis = 1;  // analysis failed or an output could not be written
inline constexpr int kExitConfig = 2;    // invalid arguments, missing or malformed inputs

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters of one CLI run. Everything except `threads` and `quiet` is
// written next to every output so a run can be replayed with --config.
struct RunConfig {
  std::string command;
  std::filesystem::path points;
  std::string category_field = "category";
  std::vector<std::string> a;
  std::vector<std::string> b;
  std::vector<std::size_t> k;
  std::string metric = "euclidean";
  std::optional<std::filesystem::path> network;
  std::optional<std::filesystem::path> network_nodes;
  double snap_warn = 500.0;
  std::string kernel = "gaussian";
  std::size_t permutations = 999;
  std::optional<std::uint64_t> seed;
  double alpha = 0.05;
  std::filesystem::path out;
  std::optional<std::filesystem::path> geojson;
  double dmax = 0.0;
  std::size_t steps = 50;
  std::optional<double> area;
  bool area_bbox = false;
  int threads = 0;
  bool quiet = false;

  // Throws ConfigError naming the offending path or parameter.
  void validate() const;
  // Flat `key = value` text accepted by `<command> --config FILE`.
  std::string to_config_text() const;
};

// Entry point shared by the executable and the tests. args[0] is the
// program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// Subcommands; the config must be validated and carry a seed.
void run_global(const RunConfig& config, std::ostream& out, std::ostream& err);
void run_lclq(const RunConfig& config, std::ostream& out, std::ostream& err);
void run_crossk(const RunConfig& config, std::ostream& out, std::ostream& err);
void run_nni(const RunConfig& config, std::ostream& out, std::ostream& err);
void run_compare_metrics(const RunConfig& config, std::ostream& out, std::ostream& err);

// Classes of a tested local quotient as mapped by the lclq output.
std::string_view lclq_class(const LCLQRecord& record);

}  // namespace colocq::cli
