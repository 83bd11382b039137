#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "remap/mapper.hpp"

namespace remap {

enum class CloneType { NonClone, T1, T2, T3, T4 };

std::string to_string(CloneType type);
CloneType parse_clone_type(std::string_view text);

struct LabeledPair {
  PairKey pair;
  CloneType clone_type = CloneType::NonClone;
  bool is_code_mapping = false;
  CodeType code_type = CodeType::Production;
  std::set<std::string> source_tools;

  bool positive(Task task) const {
    return task == Task::GenuineClone ? clone_type != CloneType::NonClone : is_code_mapping;
  }
};

/// Dataset CSV with header
///   left_key,right_key,clone_type,is_code_mapping,code_type,tools
/// clone_type in {non_clone,T1..T4}; tools separated by ';'. Throws
/// std::runtime_error on malformed rows or a code mapping labeled non_clone.
std::vector<LabeledPair> parse_dataset(std::string_view csv_text);
std::vector<LabeledPair> load_dataset(const std::filesystem::path& path);
std::string dataset_to_csv(const std::vector<LabeledPair>& dataset);

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
};

struct MetricsReport {
  double fpr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1_pos = 0.0;
  double f1_neg = 0.0;
  double avg_f1 = 0.0;
};

/// Undefined ratios (0/0) are reported as 0.
MetricsReport metrics_from(const ConfusionCounts& c);

struct Evaluation {
  ConfusionCounts counts;
  MetricsReport metrics;
};

/// Predictions outside the dataset are ignored. When only is set, the
/// dataset is restricted to that code type.
Evaluation evaluate(const std::set<PairKey>& predicted_kept, const std::vector<LabeledPair>& dataset, Task task,
                    std::optional<CodeType> only = std::nullopt);

struct SweepPoint {
  double threshold = 0.0;
  ConfusionCounts counts;
  MetricsReport metrics;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::optional<std::size_t> best;  // highest avg_f1, lowest threshold on ties
};

/// thresholds must be strictly increasing (UsageError otherwise).
SweepResult sweep(const std::vector<MappingResult>& scored, const std::vector<LabeledPair>& dataset, Task task,
                  const std::vector<double>& thresholds, std::optional<CodeType> only = std::nullopt);

/// lo, lo+step, ..., hi (inclusive, computed by index to avoid drift).
std::vector<double> threshold_ladder(double lo, double hi, double step);

std::string sweep_to_csv(const SweepResult& result);

struct ImpactStats {
  std::size_t pairs = 0;
  std::size_t affected = 0;
  double max_sas_change = 0.0;  // signed ALL - EXR with the largest magnitude
  long max_rank_change = 0;     // signed ALL rank - EXR rank with the largest magnitude
};

struct ImpactReport {
  ImpactStats overall;
  ImpactStats production;
  ImpactStats test;
};

/// Ranks are recomputed over each group (all pairs, sas desc, PairKey
/// tie-break). Throws std::runtime_error when the pair sets differ.
ImpactReport rule_impact(const std::vector<MappingResult>& scored_all, const std::vector<MappingResult>& scored_ex);

struct TrainingExample {
  PairKey pair;
  FieldSims fields;
  bool positive = false;
};

struct TunerConfig {
  double grid_step = 0.05;
  std::optional<std::size_t> k;  // defaults to the number of positives
  AbsentPolicy absent;
  Ablation ablation = Ablation::All;
};

struct TuneResult {
  WeightConfig weights;
  std::size_t k = 0;
  std::size_t top_k_tp = 0;
  std::size_t grid_points = 0;
  std::size_t optimal_points = 0;  // grid points reaching top_k_tp
};

/// True positives among the k highest-SAS examples (PairKey tie-break).
std::size_t top_k_true_positives(const std::vector<TrainingExample>& examples, const WeightConfig& w, std::size_t k,
                                 const AbsentPolicy& absent = {}, Ablation ablation = Ablation::All);

/// Exhaustive grid search over both weight simplices. Ties on the top-K TP
/// count go to the config with the largest minimum weight, then to the
/// lexicographically greatest (alpha, beta, theta, delta, eta, phi).
/// Throws std::runtime_error without positives, UsageError for a step that
/// does not divide 1.
TuneResult tune(const std::vector<TrainingExample>& training, const TunerConfig& cfg);

}  // namespace remap
