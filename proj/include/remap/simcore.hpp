#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "remap/normalizer.hpp"

namespace remap {

/// Similarity of a detail; nullopt when both sides are empty ("absent").
using Similarity = std::optional<double>;

/// 2*|LCS| / (n+m) over token sequences.
Similarity lcs_sim(const TokenSeq& a, const TokenSeq& b);
std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b);

/// Weights of the three SAS components (alpha, beta, theta) and of the
/// method-header terms (delta, eta, phi). Each triple sums to 1.
struct WeightConfig {
  double alpha = 0.5;
  double beta = 0.25;
  double theta = 0.25;
  double delta = 0.5;
  double eta = 0.35;
  double phi = 0.15;

  /// Throws UsageError when a weight leaves [0,1] or a triple does not sum to 1.
  void validate() const;
  bool operator==(const WeightConfig&) const = default;
};

/// How empty-on-both-sides details enter the components.
struct AbsentPolicy {
  double class_doc_absent = 0.0;  // contribution of an absent class doc
  double params_absent = 1.0;     // both methods take no parameters
  bool drop_absent_optional = true;
  /// When no optional evidence exists at all, rescale SAS by alpha+beta
  /// instead of counting simOptional as 0.
  bool renormalize_missing_optional = false;
};

enum class Ablation { All, Exr1, Exr2, Exr3, Exr4 };

std::string to_string(Ablation a);
Ablation parse_ablation(std::string_view text);

/// The eight per-detail similarities. They depend only on the token
/// sequences, never on weights.
struct FieldSims {
  Similarity class_name;
  Similarity class_doc;
  Similarity method_name;
  Similarity return_type;
  Similarity param;
  Similarity local_var;
  Similarity method_doc;
  Similarity comment;

  bool operator==(const FieldSims&) const = default;
};

struct SASBreakdown {
  FieldSims fields;
  double sim_class = 0.0;
  double sim_method_header = 0.0;
  double sim_optional = 0.0;
  bool optional_missing = false;  // every optional detail absent
  double sas = 0.0;
  Ablation ablation = Ablation::All;
};

FieldSims field_sims(const NormalizedDetails& a, const NormalizedDetails& b);

/// Applies ablation overrides to the detail similarities, then aggregates
/// them into simClass / simMethodHeader / simOptional. sas is left at 0.
SASBreakdown components(const FieldSims& fields, const WeightConfig& w, Ablation ablation,
                        const AbsentPolicy& policy = {});
SASBreakdown components(const NormalizedDetails& a, const NormalizedDetails& b, const WeightConfig& w,
                        Ablation ablation, const AbsentPolicy& policy = {});

/// alpha*simClass + beta*simMethodHeader + theta*simOptional.
double sas(const SASBreakdown& breakdown, const WeightConfig& w, const AbsentPolicy& policy = {});

/// components() followed by sas(), stored in the breakdown.
SASBreakdown score(const FieldSims& fields, const WeightConfig& w, Ablation ablation,
                   const AbsentPolicy& policy = {});

}  // namespace remap
