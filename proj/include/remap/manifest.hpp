#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace remap {

/// Provenance record written next to every pipeline output as
/// <output>.manifest.json.
struct RunManifest {
  std::string tool_version;
  std::string command;
  std::vector<std::string> argv;
  std::map<std::string, std::string> config_hashes;  // label -> fnv1a64 hex
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string started_at;   // UTC, ISO 8601
  std::string finished_at;
  std::map<std::string, long long> counters;

  void hash_config(const std::string& label, std::string_view content);
  std::string to_json() const;
};

std::string tool_version();
std::string utc_timestamp();
std::filesystem::path manifest_path(const std::filesystem::path& output);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& output);

}  // namespace remap
