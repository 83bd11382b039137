#include "remap/manifest.hpp"

#include <chrono>
#include <ctime>

#include "json_fwd.hpp"
#include "remap/util.hpp"

#ifndef REMAP_VERSION
#define REMAP_VERSION "0.0.0"
#endif

namespace remap {

void RunManifest::hash_config(const std::string& label, std::string_view content) {
  config_hashes[label] = hex64(fnv1a64(content));
}

std::string RunManifest::to_json() const {
  json j;
  j["tool_version"] = tool_version;
  j["command"] = command;
  j["argv"] = argv;
  j["config_hashes"] = json::object();
  for (const auto& [k, v] : config_hashes) j["config_hashes"][k] = v;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["counters"] = json::object();
  for (const auto& [k, v] : counters) j["counters"][k] = v;
  return j.dump(2) + "\n";
}

std::string tool_version() { return REMAP_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& output) {
  write_file(manifest_path(output), manifest.to_json());
}

}  // namespace remap
