#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "colocq/cli.hpp"

namespace colocq::cli {

// Writes `content` to `path` and checks that it reads back with the
// expected number of lines. Throws std::runtime_error on failure.
void write_checked(const std::filesystem::path& path, const std::string& content,
                   std::size_t expected_lines);

// `<out>.run.toml` next to an output file.
std::filesystem::path sidecar_path(const std::filesystem::path& out);
void write_sidecar(const RunConfig& config, const std::filesystem::path& out);

nlohmann::ordered_json metadata_json(const RunConfig& config);

}  // namespace colocq::cli
