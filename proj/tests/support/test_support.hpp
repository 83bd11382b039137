#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "remap/extractor.hpp"
#include "remap/util.hpp"

namespace remap::testing {

inline std::filesystem::path fixture_dir() { return REMAP_FIXTURE_DIR; }

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("remap-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

using SourceTree = std::map<std::string, std::string>;

inline void write_tree(const std::filesystem::path& root, const SourceTree& files) {
  for (const auto& [rel, content] : files) write_file(root / rel, content);
}

/// Materializes sources under a fresh directory and extracts them.
inline ProjectSnapshot snapshot_of(const TempDir& dir, const std::string& sub, const SourceTree& files,
                                   ProjectRole role, const ExtractOptions& opts = {}) {
  const auto root = dir / sub;
  std::filesystem::create_directories(root);
  write_tree(root, files);
  return extract(root, role, sub, opts);
}

/// Longest common subsequence by enumerating every subsequence of the
/// shorter sequence. Exponential; only for short inputs.
inline std::size_t lcs_by_enumeration(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& t = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  const std::uint32_t subsets = 1u << s.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    const auto bits = static_cast<std::size_t>(__builtin_popcount(mask));
    if (bits <= best) continue;
    std::size_t j = 0;
    bool ok = true;
    for (std::size_t i = 0; i < s.size() && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (j < t.size() && t[j] != s[i]) ++j;
      if (j == t.size()) ok = false;
      else ++j;
    }
    if (ok) best = bits;
  }
  return best;
}

inline std::vector<std::string> random_tokens(std::mt19937& rng, std::size_t max_len, int alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  std::vector<std::string> out(len(rng));
  for (auto& tok : out) tok = std::string(1, static_cast<char>('a' + sym(rng)));
  return out;
}

}  // namespace remap::testing
