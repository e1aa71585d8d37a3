#include "output.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace colocq::cli {

void write_checked(const std::filesystem::path& path, const std::string& content,
                   std::size_t expected_lines) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed writing output file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  std::string back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto lines = static_cast<std::size_t>(std::count(back.begin(), back.end(), '\n'));
  if (back != content || lines != expected_lines) {
    throw std::runtime_error("output file did not validate after writing: " + path.string());
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".run.toml");
}

void write_sidecar(const RunConfig& config, const std::filesystem::path& out) {
  auto text = config.to_config_text();
  write_checked(sidecar_path(out), text,
                static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')));
}

nlohmann::ordered_json metadata_json(const RunConfig& config) {
  nlohmann::ordered_json meta;
  meta["tool"] = std::string(kToolName);
  meta["version"] = std::string(kToolVersion);
  meta["command"] = config.command;
  meta["seed"] = config.seed.value_or(0);
  meta["config"] = config.to_config_text();
  return meta;
}

}  // namespace colocq::cli
