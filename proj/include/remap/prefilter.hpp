#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "remap/extractor.hpp"
#include "remap/normalizer.hpp"

namespace remap {

/// Sparse embedding: feature -> weight. Dense providers may key by index.
using Embedding = std::map<std::string, double>;

double cosine(const Embedding& a, const Embedding& b);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  /// body is the verbatim method source; role selects the rename rules.
  virtual Embedding embed(const std::string& body, ProjectRole role) const = 0;
};

/// Token-count vectors over rule-normalized body tokens.
class BagOfTokensEmbedder final : public EmbeddingProvider {
 public:
  explicit BagOfTokensEmbedder(RuleSet rules = {}) : rules_(std::move(rules)) {}
  std::string name() const override { return "bag-of-tokens"; }
  Embedding embed(const std::string& body, ProjectRole role) const override;

 private:
  RuleSet rules_;
};

using EmbedderFactory = std::function<std::unique_ptr<EmbeddingProvider>(const RuleSet&)>;
void register_embedder(const std::string& name, EmbedderFactory factory);
/// Throws UsageError naming the provider when it is not registered.
std::unique_ptr<EmbeddingProvider> make_embedder(const std::string& name, const RuleSet& rules);
std::vector<std::string> embedder_names();

struct PrefilterConfig {
  double class_sim_threshold = 0.5;
  double line_ratio_cutoff = 2.0;
  double embed_threshold = 0.5;
  std::string embedding_provider = "bag-of-tokens";

  void validate() const;
};

struct ClassPair {
  std::string left;
  std::string right;
  double name_sim = 0.0;
};

enum class ProvenanceKind { Detector, Prefilter, Exhaustive };

struct CandidatePair {
  std::string left;   // MethodRecord id in the original snapshot
  std::string right;  // MethodRecord id in the redesigned snapshot
  ProvenanceKind provenance = ProvenanceKind::Exhaustive;
  std::string detector;       // set when provenance == Detector
  std::string detector_meta;  // raw report reference, e.g. "report.xml:12"
};

std::string provenance_label(const CandidatePair& pair);

std::vector<ClassPair> filter_classes(const ProjectSnapshot& left, const ProjectSnapshot& right,
                                      const RuleSet& rules, const PrefilterConfig& cfg);

/// Pairs methods within retained class pairs, dropping pairs whose
/// line-count ratio reaches the cutoff or whose embedding similarity falls
/// below the threshold. Provider failures are rethrown naming the provider.
std::vector<CandidatePair> generate_pairs(const std::vector<ClassPair>& classes, const ProjectSnapshot& left,
                                          const ProjectSnapshot& right, const PrefilterConfig& cfg,
                                          const EmbeddingProvider& embedder);
std::vector<CandidatePair> generate_pairs(const std::vector<ClassPair>& classes, const ProjectSnapshot& left,
                                          const ProjectSnapshot& right, const PrefilterConfig& cfg,
                                          const RuleSet& rules);

std::vector<CandidatePair> exhaustive_pairs(const ProjectSnapshot& left, const ProjectSnapshot& right,
                                            int min_loc = 5);

// Pair files: JSON Lines, one CandidatePair per line.
std::string pairs_to_jsonl(const std::vector<CandidatePair>& pairs);
std::vector<CandidatePair> load_pairs(const std::filesystem::path& path);

}  // namespace remap
