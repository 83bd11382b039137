#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "remap/extractor.hpp"
#include "remap/prefilter.hpp"

namespace remap {

/// Canonical pair identity: left is always the original-project method.
struct PairKey {
  std::string left;
  std::string right;

  auto operator<=>(const PairKey&) const = default;
};

struct IngestStats {
  std::size_t lines = 0;
  std::size_t malformed = 0;
  std::size_t unresolved_fragments = 0;
  std::size_t unresolved_pairs = 0;
  std::size_t same_project = 0;
  std::size_t duplicates = 0;
  std::size_t emitted = 0;
  std::vector<std::string> diagnostics;
};

/// Generic interchange format, one JSON object per line:
///   {"format_version": 1, "detector": "nicad",
///    "left":  {"file": "...", "start": 10, "end": 20} | {"key": "<method id>"},
///    "right": {...}}
/// Throws std::runtime_error when more than half of the pairs fail to
/// resolve (likely a stale snapshot).
std::vector<CandidatePair> ingest_generic(const std::filesystem::path& path, const ProjectSnapshot& left,
                                          const ProjectSnapshot& right, IngestStats* stats = nullptr);
std::vector<CandidatePair> ingest_generic_text(std::string_view text, const std::string& source_name,
                                               const ProjectSnapshot& left, const ProjectSnapshot& right,
                                               IngestStats* stats = nullptr);

/// NiCad clone-pair XML (<clone><source file= startline= endline=/>...</clone>).
/// Clone classes (<class>) expand to every cross-project pair of sources.
/// Throws std::runtime_error on malformed XML.
std::vector<CandidatePair> ingest_nicad_xml(const std::filesystem::path& path, const ProjectSnapshot& left,
                                            const ProjectSnapshot& right, IngestStats* stats = nullptr);
std::vector<CandidatePair> ingest_nicad_xml_text(std::string_view text, const std::string& source_name,
                                                 const ProjectSnapshot& left, const ProjectSnapshot& right,
                                                 IngestStats* stats = nullptr);

}  // namespace remap
