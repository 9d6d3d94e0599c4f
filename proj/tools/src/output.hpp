#pragma once

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace sptnoise::cli {

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string content;
};

struct RunContext {
  std::string command;
  std::optional<std::string> preset;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::optional<std::string> out_dir;
  bool force = false;
  std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
};

std::string sha256_hex(const std::string& data);

// Builds the manifest for artifacts that are about to be written.
nlohmann::json make_manifest(const RunContext& ctx, const std::vector<Artifact>& artifacts);

// With an output directory: writes every artifact plus manifest.json
// atomically, refusing any collision up front unless forced. Without one:
// prints the artifacts to `out`.
void emit(const RunContext& ctx, const std::vector<Artifact>& artifacts, std::ostream& out);

}  // namespace sptnoise::cli
