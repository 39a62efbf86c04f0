#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tskan::cli {

/// Lower-case hex SHA-256 of a byte string / file. Throws IoError.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct Artifact {
  std::string path;  ///< relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string command;
  nlohmann::json config;
  nlohmann::json seeds;
  nlohmann::json inputs = nlohmann::json::object();
  std::string output_dir;
  double duration_seconds = 0.0;
  std::vector<Artifact> artifacts;

  /// Hashes `relative` under output_dir and records it.
  void add_artifact(const std::string& relative);
  nlohmann::json to_json() const;
};

inline constexpr const char* kRunManifestName = "run_manifest.json";

}  // namespace tskan::cli
