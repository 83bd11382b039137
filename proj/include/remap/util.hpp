#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace remap {

/// Raised for invalid invocations and malformed configuration (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of worker threads used by parallel stages. 0 means "all cores".
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs fn(i) for i in [0, n) across the configured worker threads.
/// fn must not touch shared mutable state; the first exception thrown by
/// any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::vector<std::string> split_lines(std::string_view text);
std::string collapse_whitespace(std::string_view text);
std::string trim(std::string_view text);
bool starts_with(std::string_view text, std::string_view prefix);
bool ends_with(std::string_view text, std::string_view suffix);

/// Forward-slash path relative to root; used as the canonical file key.
std::string relative_generic(const std::filesystem::path& path,
                             const std::filesystem::path& root);

/// 64-bit FNV-1a, stable across platforms. Used for config fingerprints.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace remap
