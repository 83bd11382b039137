#include "remap/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "json_fwd.hpp"
#include "remap/csv.hpp"
#include "remap/util.hpp"

namespace remap {

std::string to_string(Task task) { return task == Task::GenuineClone ? "genuine_clone" : "code_mapping"; }

Task parse_task(std::string_view text) {
  if (text == "gc" || text == "genuine_clone" || text == "GC") return Task::GenuineClone;
  if (text == "cm" || text == "code_mapping" || text == "CM") return Task::CodeMapping;
  throw UsageError("unknown task: " + std::string(text));
}

std::string to_string(CodeType type) { return type == CodeType::Production ? "production" : "test"; }

CodeType parse_code_type(std::string_view text) {
  if (text == "production" || text == "prod") return CodeType::Production;
  if (text == "test") return CodeType::Test;
  throw std::runtime_error("unknown code type: " + std::string(text));
}

Profile profile(std::string_view name) {
  if (name == "soot-sootup") return {"soot-sootup", "soot-sootup", 0.5, 0.6};
  if (name == "findbugs-spotbugs") return {"findbugs-spotbugs", "findbugs-spotbugs", 0.6, 0.8};
  if (name == "generic") return {"generic", "none", 0.5, 0.6};
  throw UsageError("unknown profile: " + std::string(name));
}

void FilterConfig::validate() const {
  if (!(thres_sas >= 0.0 && thres_sas <= 1.0)) throw UsageError("SAS threshold must lie in [0,1]");
  weights.validate();
}

namespace {

bool rank_before(const MappingResult& a, const MappingResult& b) {
  if (a.breakdown.sas != b.breakdown.sas) return a.breakdown.sas > b.breakdown.sas;
  return a.pair < b.pair;
}

json sim_json(const Similarity& s) { return s ? json(*s) : json(nullptr); }

Similarity sim_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json result_to_json(const MappingResult& r) {
  const auto& b = r.breakdown;
  const auto& f = b.fields;
  return json{{"left", r.pair.left},
              {"right", r.pair.right},
              {"code_type", to_string(r.code_type)},
              {"provenance", r.provenance},
              {"kept", r.kept},
              {"rank", r.rank},
              {"sas", b.sas},
              {"ablation", to_string(b.ablation)},
              {"components",
               {{"sim_class", b.sim_class},
                {"sim_method_header", b.sim_method_header},
                {"sim_optional", b.sim_optional},
                {"optional_missing", b.optional_missing}}},
              {"fields",
               {{"class_name", sim_json(f.class_name)},
                {"class_doc", sim_json(f.class_doc)},
                {"method_name", sim_json(f.method_name)},
                {"return_type", sim_json(f.return_type)},
                {"param", sim_json(f.param)},
                {"local_var", sim_json(f.local_var)},
                {"method_doc", sim_json(f.method_doc)},
                {"comment", sim_json(f.comment)}}}};
}

MappingResult result_from_json(const json& j) {
  MappingResult r;
  r.pair = {j.at("left").get<std::string>(), j.at("right").get<std::string>()};
  r.code_type = parse_code_type(j.value("code_type", std::string("production")));
  r.provenance = j.value("provenance", std::string{});
  r.kept = j.at("kept").get<bool>();
  r.rank = j.at("rank").get<int>();
  auto& b = r.breakdown;
  b.sas = j.at("sas").get<double>();
  b.ablation = parse_ablation(j.value("ablation", std::string("ALL")));
  const auto& c = j.at("components");
  b.sim_class = c.at("sim_class").get<double>();
  b.sim_method_header = c.at("sim_method_header").get<double>();
  b.sim_optional = c.at("sim_optional").get<double>();
  b.optional_missing = c.value("optional_missing", false);
  const auto& f = j.at("fields");
  b.fields = FieldSims{sim_from(f.at("class_name")), sim_from(f.at("class_doc")),  sim_from(f.at("method_name")),
                       sim_from(f.at("return_type")), sim_from(f.at("param")),    sim_from(f.at("local_var")),
                       sim_from(f.at("method_doc")),  sim_from(f.at("comment"))};
  return r;
}

std::string fmt_sim(const Similarity& s) { return s ? json(*s).dump() : std::string(); }

}  // namespace

void apply_threshold(std::vector<MappingResult>& results, double thres_sas) {
  for (auto& r : results) {
    r.kept = r.breakdown.sas >= thres_sas - kScoreSlack;
    r.rank = 0;
  }
  std::stable_sort(results.begin(), results.end(), [](const MappingResult& a, const MappingResult& b) {
    if (a.kept != b.kept) return a.kept;
    return rank_before(a, b);
  });
  int rank = 0;
  for (auto& r : results)
    if (r.kept) r.rank = ++rank;
}

std::vector<MappingResult> score_pairs(const std::vector<CandidatePair>& pairs, const ProjectSnapshot& left,
                                       const ProjectSnapshot& right, const FilterConfig& cfg) {
  cfg.validate();
  const RuleSet no_rules;
  const RuleSet& rules = cfg.ablation == Ablation::Exr1 ? no_rules : cfg.rules;

  std::unordered_map<std::string, std::size_t> left_idx, right_idx;
  for (std::size_t i = 0; i < left.records.size(); ++i) left_idx.emplace(left.records[i].id, i);
  for (std::size_t i = 0; i < right.records.size(); ++i) right_idx.emplace(right.records[i].id, i);

  struct Job {
    std::size_t l, r;
    const CandidatePair* pair;
  };
  std::vector<Job> jobs;
  std::map<PairKey, bool> seen;
  std::vector<char> need_left(left.records.size(), 0), need_right(right.records.size(), 0);
  for (const auto& p : pairs) {
    auto li = left_idx.find(p.left);
    if (li == left_idx.end()) throw std::runtime_error("unknown method id in original snapshot: " + p.left);
    auto ri = right_idx.find(p.right);
    if (ri == right_idx.end()) throw std::runtime_error("unknown method id in redesigned snapshot: " + p.right);
    if (!seen.emplace(PairKey{p.left, p.right}, true).second) continue;
    jobs.push_back({li->second, ri->second, &p});
    need_left[li->second] = need_right[ri->second] = 1;
  }

  auto normalize_side = [&](const ProjectSnapshot& snap, const std::vector<char>& need) {
    std::vector<std::optional<NormalizedDetails>> out(snap.records.size());
    parallel_for(snap.records.size(), [&](std::size_t i) {
      if (!need[i]) return;
      const auto& rec = snap.records[i];
      out[i] = normalize_record(rec, snap.class_of(rec), snap.role, rules, cfg.doc);
    });
    return out;
  };
  const auto left_norm = normalize_side(left, need_left);
  const auto right_norm = normalize_side(right, need_right);

  std::vector<MappingResult> results(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    MappingResult& r = results[i];
    r.pair = {job.pair->left, job.pair->right};
    r.provenance = provenance_label(*job.pair);
    r.code_type = left.records[job.l].is_test || right.records[job.r].is_test ? CodeType::Test : CodeType::Production;
    r.breakdown = score(field_sims(*left_norm[job.l], *right_norm[job.r]), cfg.weights, cfg.ablation, cfg.absent);
  });
  apply_threshold(results, cfg.thres_sas);
  return results;
}

double out_percent(std::size_t orig, std::size_t filt) {
  if (orig == 0) return 0.0;
  const double raw = 100.0 * static_cast<double>(orig - filt) / static_cast<double>(orig);
  return std::round(raw * 100.0) / 100.0;
}

Summary summarize(const std::vector<MappingResult>& results) {
  Summary s;
  s.orig = results.size();
  s.filt = static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](auto& r) { return r.kept; }));
  s.out_pct = out_percent(s.orig, s.filt);
  return s;
}

Summary summarize(const std::vector<MappingResult>& results, CodeType type) {
  std::vector<MappingResult> subset;
  for (const auto& r : results)
    if (r.code_type == type) subset.push_back(r);
  return summarize(subset);
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "jsonl") return ReportFormat::Jsonl;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "summary") return ReportFormat::Summary;
  throw UsageError("unknown report format: " + std::string(text));
}

std::string report(const std::vector<MappingResult>& results, ReportFormat fmt, double thres_sas) {
  std::string out;
  switch (fmt) {
    case ReportFormat::Jsonl:
      for (const auto& r : results) {
        out += result_to_json(r).dump();
        out.push_back('\n');
      }
      break;
    case ReportFormat::Csv:
      out += csv::format_row({"left", "right", "code_type", "provenance", "kept", "rank", "sas", "sim_class",
                              "sim_method_header", "sim_optional", "class_name", "class_doc", "method_name",
                              "return_type", "param", "local_var", "method_doc", "comment", "ablation"});
      for (const auto& r : results) {
        const auto& b = r.breakdown;
        const auto& f = b.fields;
        out += csv::format_row({r.pair.left, r.pair.right, to_string(r.code_type), r.provenance,
                                r.kept ? "true" : "false", std::to_string(r.rank), json(b.sas).dump(),
                                json(b.sim_class).dump(), json(b.sim_method_header).dump(),
                                json(b.sim_optional).dump(), fmt_sim(f.class_name), fmt_sim(f.class_doc),
                                fmt_sim(f.method_name), fmt_sim(f.return_type), fmt_sim(f.param),
                                fmt_sim(f.local_var), fmt_sim(f.method_doc), fmt_sim(f.comment),
                                to_string(b.ablation)});
      }
      break;
    case ReportFormat::Summary: {
      auto summary_json = [](const Summary& s) {
        return json{{"orig", s.orig}, {"filt", s.filt}, {"out_pct", s.out_pct}};
      };
      json j{{"threshold", thres_sas}, {"total", summary_json(summarize(results))}};
      j["production"] = summary_json(summarize(results, CodeType::Production));
      j["test"] = summary_json(summarize(results, CodeType::Test));
      out = j.dump(2) + "\n";
      break;
    }
  }
  return out;
}

std::vector<MappingResult> parse_results(std::string_view jsonl) {
  std::vector<MappingResult> out;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(jsonl)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(result_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": malformed score record: " + e.what());
    }
  }
  return out;
}

std::vector<MappingResult> load_results(const std::filesystem::path& path) {
  try {
    return parse_results(read_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace remap
