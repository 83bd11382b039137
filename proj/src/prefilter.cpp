#include "remap/prefilter.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "json_fwd.hpp"
#include "remap/simcore.hpp"
#include "remap/util.hpp"

namespace remap {

double cosine(const Embedding& a, const Embedding& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) {
    na += v * v;
    auto it = b.find(k);
    if (it != b.end()) dot += v * it->second;
  }
  for (const auto& [k, v] : b) nb += v * v;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

Embedding BagOfTokensEmbedder::embed(const std::string& body, ProjectRole role) const {
  Embedding counts;
  for (auto& t : tokenize(apply_rules(body, FieldKind::Body, role, rules_))) counts[t] += 1.0;
  return counts;
}

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, EmbedderFactory>& registry() {
  static std::map<std::string, EmbedderFactory> r = {
      {"bag-of-tokens", [](const RuleSet& rules) { return std::make_unique<BagOfTokensEmbedder>(rules); }}};
  return r;
}

bool pair_order(const CandidatePair& a, const CandidatePair& b) {
  return std::tie(a.left, a.right) < std::tie(b.left, b.right);
}

}  // namespace

void register_embedder(const std::string& name, EmbedderFactory factory) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(factory);
}

std::unique_ptr<EmbeddingProvider> make_embedder(const std::string& name, const RuleSet& rules) {
  std::lock_guard lock(registry_mutex());
  auto it = registry().find(name);
  if (it == registry().end()) throw UsageError("unknown embedding provider: " + name);
  return it->second(rules);
}

std::vector<std::string> embedder_names() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

void PrefilterConfig::validate() const {
  if (!(class_sim_threshold >= 0.0 && class_sim_threshold <= 1.0))
    throw UsageError("class similarity threshold must lie in [0,1]");
  if (!(embed_threshold >= 0.0 && embed_threshold <= 1.0)) throw UsageError("embedding threshold must lie in [0,1]");
  if (!(line_ratio_cutoff >= 1.0)) throw UsageError("line-ratio cutoff must be >= 1");
}

std::string provenance_label(const CandidatePair& pair) {
  switch (pair.provenance) {
    case ProvenanceKind::Detector: return pair.detector;
    case ProvenanceKind::Prefilter: return "prefilter";
    case ProvenanceKind::Exhaustive: return "exhaustive";
  }
  return "";
}

std::vector<ClassPair> filter_classes(const ProjectSnapshot& left, const ProjectSnapshot& right,
                                      const RuleSet& rules, const PrefilterConfig& cfg) {
  cfg.validate();
  auto tokens_of = [&](const ProjectSnapshot& snap) {
    std::vector<std::pair<std::string, TokenSeq>> out;
    for (const auto& [name, cls] : snap.class_index)
      out.emplace_back(name, tokenize(apply_rules(qualified_class_name_for_similarity(name), FieldKind::ClassName,
                                                  snap.role, rules)));
    return out;
  };
  const auto lt = tokens_of(left);
  const auto rt = tokens_of(right);
  std::vector<std::vector<ClassPair>> rows(lt.size());
  parallel_for(lt.size(), [&](std::size_t i) {
    for (const auto& [rname, rtok] : rt) {
      const double sim = lcs_sim(lt[i].second, rtok).value_or(0.0);
      if (sim >= cfg.class_sim_threshold) rows[i].push_back({lt[i].first, rname, sim});
    }
  });
  std::vector<ClassPair> out;
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<CandidatePair> generate_pairs(const std::vector<ClassPair>& classes, const ProjectSnapshot& left,
                                          const ProjectSnapshot& right, const PrefilterConfig& cfg,
                                          const EmbeddingProvider& embedder) {
  cfg.validate();
  std::map<std::string, std::vector<const MethodRecord*>> left_by_class, right_by_class;
  for (const auto& r : left.records) left_by_class[r.class_name].push_back(&r);
  for (const auto& r : right.records) right_by_class[r.class_name].push_back(&r);

  auto embed_all = [&](const ProjectSnapshot& snap) {
    std::vector<Embedding> out(snap.records.size());
    parallel_for(snap.records.size(), [&](std::size_t i) {
      try {
        out[i] = embedder.embed(snap.records[i].body_text, snap.role);
      } catch (const std::exception& e) {
        throw std::runtime_error("embedding provider '" + embedder.name() + "' failed: " + e.what());
      }
    });
    std::map<const MethodRecord*, std::size_t> index;
    for (std::size_t i = 0; i < snap.records.size(); ++i) index[&snap.records[i]] = i;
    return std::make_pair(std::move(out), std::move(index));
  };
  const auto [left_emb, left_idx] = embed_all(left);
  const auto [right_emb, right_idx] = embed_all(right);

  std::vector<std::vector<CandidatePair>> rows(classes.size());
  parallel_for(classes.size(), [&](std::size_t c) {
    const auto lit = left_by_class.find(classes[c].left);
    const auto rit = right_by_class.find(classes[c].right);
    if (lit == left_by_class.end() || rit == right_by_class.end()) return;
    for (const MethodRecord* lm : lit->second) {
      for (const MethodRecord* rm : rit->second) {
        const double ratio = static_cast<double>(std::max(lm->loc, rm->loc)) / std::min(lm->loc, rm->loc);
        if (ratio >= cfg.line_ratio_cutoff) continue;
        const double sim = cosine(left_emb[left_idx.at(lm)], right_emb[right_idx.at(rm)]);
        if (sim < cfg.embed_threshold) continue;
        rows[c].push_back({lm->id, rm->id, ProvenanceKind::Prefilter, {}, {}});
      }
    }
  });
  std::vector<CandidatePair> out;
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  std::sort(out.begin(), out.end(), pair_order);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const CandidatePair& a, const CandidatePair& b) {
                          return a.left == b.left && a.right == b.right;
                        }),
            out.end());
  return out;
}

std::vector<CandidatePair> generate_pairs(const std::vector<ClassPair>& classes, const ProjectSnapshot& left,
                                          const ProjectSnapshot& right, const PrefilterConfig& cfg,
                                          const RuleSet& rules) {
  const auto embedder = make_embedder(cfg.embedding_provider, rules);
  return generate_pairs(classes, left, right, cfg, *embedder);
}

std::vector<CandidatePair> exhaustive_pairs(const ProjectSnapshot& left, const ProjectSnapshot& right, int min_loc) {
  std::vector<CandidatePair> out;
  for (const auto& l : left.records) {
    if (l.loc < min_loc) continue;
    for (const auto& r : right.records)
      if (r.loc >= min_loc) out.push_back({l.id, r.id, ProvenanceKind::Exhaustive, {}, {}});
  }
  std::sort(out.begin(), out.end(), pair_order);
  return out;
}

std::string pairs_to_jsonl(const std::vector<CandidatePair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    json j{{"format_version", 1}, {"left", p.left}, {"right", p.right}};
    switch (p.provenance) {
      case ProvenanceKind::Detector:
        j["provenance"] = "detector";
        j["detector"] = p.detector;
        if (!p.detector_meta.empty()) j["detector_meta"] = p.detector_meta;
        break;
      case ProvenanceKind::Prefilter: j["provenance"] = "prefilter"; break;
      case ProvenanceKind::Exhaustive: j["provenance"] = "exhaustive"; break;
    }
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<CandidatePair> load_pairs(const std::filesystem::path& path) {
  std::vector<CandidatePair> out;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(read_file(path))) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      CandidatePair p;
      p.left = j.at("left").get<std::string>();
      p.right = j.at("right").get<std::string>();
      const std::string prov = j.value("provenance", std::string("exhaustive"));
      if (prov == "detector") {
        p.provenance = ProvenanceKind::Detector;
        p.detector = j.value("detector", std::string("unknown"));
        p.detector_meta = j.value("detector_meta", std::string{});
      } else if (prov == "prefilter") {
        p.provenance = ProvenanceKind::Prefilter;
      } else if (prov == "exhaustive") {
        p.provenance = ProvenanceKind::Exhaustive;
      } else {
        throw std::runtime_error("unknown provenance '" + prov + "'");
      }
      out.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed pair: " + e.what());
    }
  }
  return out;
}

}  // namespace remap
