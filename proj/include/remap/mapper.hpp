#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "remap/ingest.hpp"
#include "remap/normalizer.hpp"
#include "remap/prefilter.hpp"
#include "remap/simcore.hpp"

namespace remap {

enum class Task { GenuineClone, CodeMapping };
enum class CodeType { Production, Test };

std::string to_string(Task task);
Task parse_task(std::string_view text);
std::string to_string(CodeType type);
CodeType parse_code_type(std::string_view text);

/// Scores within this slack of the threshold count as reaching it.
inline constexpr double kScoreSlack = 1e-9;

/// Named redesign profile: bundled rules plus default SAS thresholds per task.
struct Profile {
  std::string name;
  std::string rules;
  double genuine_clone_threshold;
  double code_mapping_threshold;

  double threshold(Task task) const {
    return task == Task::GenuineClone ? genuine_clone_threshold : code_mapping_threshold;
  }
};

/// "soot-sootup" (heavy redesign), "findbugs-spotbugs" (light redesign),
/// "generic" (no rules, heavy-redesign thresholds).
Profile profile(std::string_view name);

struct FilterConfig {
  double thres_sas = 0.6;
  Task task = Task::CodeMapping;
  WeightConfig weights;
  Ablation ablation = Ablation::All;
  RuleSet rules;
  AbsentPolicy absent;
  DocOptions doc;

  void validate() const;
};

struct MappingResult {
  PairKey pair;
  SASBreakdown breakdown;
  bool kept = false;
  int rank = 0;  // 1-based among kept pairs; 0 when filtered out
  CodeType code_type = CodeType::Production;
  std::string provenance;
};

/// Scores every pair (duplicates by PairKey are collapsed), applies the
/// threshold and ranks kept pairs by SAS with PairKey as tie-break.
/// Results are ordered kept-by-rank first, then the rest by SAS.
/// Throws std::runtime_error naming any id missing from its snapshot.
std::vector<MappingResult> score_pairs(const std::vector<CandidatePair>& pairs, const ProjectSnapshot& left,
                                       const ProjectSnapshot& right, const FilterConfig& cfg);

/// Re-applies a threshold and recomputes kept/rank in place.
void apply_threshold(std::vector<MappingResult>& results, double thres_sas);

struct Summary {
  std::size_t orig = 0;
  std::size_t filt = 0;
  double out_pct = 0.0;  // 100*(orig-filt)/orig, 0 when orig == 0
};

double out_percent(std::size_t orig, std::size_t filt);
Summary summarize(const std::vector<MappingResult>& results);
Summary summarize(const std::vector<MappingResult>& results, CodeType type);

enum class ReportFormat { Jsonl, Csv, Summary };
ReportFormat parse_report_format(std::string_view text);

std::string report(const std::vector<MappingResult>& results, ReportFormat fmt, double thres_sas = 0.0);

std::vector<MappingResult> load_results(const std::filesystem::path& path);
std::vector<MappingResult> parse_results(std::string_view jsonl);

}  // namespace remap
