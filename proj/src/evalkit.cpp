#include "remap/evalkit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "json_fwd.hpp"
#include "remap/csv.hpp"
#include "remap/util.hpp"

namespace remap {

std::string to_string(CloneType type) {
  switch (type) {
    case CloneType::NonClone: return "non_clone";
    case CloneType::T1: return "T1";
    case CloneType::T2: return "T2";
    case CloneType::T3: return "T3";
    case CloneType::T4: return "T4";
  }
  return "non_clone";
}

CloneType parse_clone_type(std::string_view text) {
  if (text == "non_clone" || text == "none" || text == "NC") return CloneType::NonClone;
  if (text == "T1" || text == "t1" || text == "1") return CloneType::T1;
  if (text == "T2" || text == "t2" || text == "2") return CloneType::T2;
  if (text == "T3" || text == "t3" || text == "3") return CloneType::T3;
  if (text == "T4" || text == "t4" || text == "4") return CloneType::T4;
  throw std::runtime_error("unknown clone type: " + std::string(text));
}

namespace {

bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "TRUE" || s == "True") return true;
  if (s == "0" || s == "false" || s == "no" || s == "FALSE" || s == "False" || s.empty()) return false;
  throw std::runtime_error("not a boolean: " + s);
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

std::vector<LabeledPair> parse_dataset(std::string_view csv_text) {
  const auto rows = csv::parse(csv_text);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
  for (const char* required : {"left_key", "right_key", "clone_type", "is_code_mapping", "code_type"})
    if (!col.count(required)) throw std::runtime_error(std::string("dataset is missing column ") + required);

  std::vector<LabeledPair> out;
  std::set<PairKey> keys;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    auto cell = [&](const char* name) -> std::string {
      const std::size_t c = col.at(name);
      return c < row.size() ? trim(row[c]) : std::string();
    };
    try {
      LabeledPair lp;
      lp.pair = {cell("left_key"), cell("right_key")};
      lp.clone_type = parse_clone_type(cell("clone_type"));
      lp.is_code_mapping = parse_bool(cell("is_code_mapping"));
      lp.code_type = parse_code_type(cell("code_type"));
      if (col.count("tools")) {
        const std::string tools = cell("tools");
        std::size_t start = 0;
        while (start <= tools.size()) {
          std::size_t sep = tools.find(';', start);
          if (sep == std::string::npos) sep = tools.size();
          const std::string t = trim(std::string_view(tools).substr(start, sep - start));
          if (!t.empty()) lp.source_tools.insert(t);
          start = sep + 1;
        }
      }
      if (lp.is_code_mapping && lp.clone_type == CloneType::NonClone)
        throw std::runtime_error("code mapping labeled non_clone");
      if (!keys.insert(lp.pair).second) throw std::runtime_error("duplicate pair");
      out.push_back(std::move(lp));
    } catch (const std::exception& e) {
      throw std::runtime_error("dataset row " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LabeledPair> load_dataset(const std::filesystem::path& path) {
  try {
    return parse_dataset(read_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string dataset_to_csv(const std::vector<LabeledPair>& dataset) {
  std::string out = csv::format_row({"left_key", "right_key", "clone_type", "is_code_mapping", "code_type", "tools"});
  for (const auto& lp : dataset) {
    std::string tools;
    for (const auto& t : lp.source_tools) tools += (tools.empty() ? "" : ";") + t;
    out += csv::format_row({lp.pair.left, lp.pair.right, to_string(lp.clone_type),
                            lp.is_code_mapping ? "true" : "false", to_string(lp.code_type), tools});
  }
  return out;
}

MetricsReport metrics_from(const ConfusionCounts& c) {
  MetricsReport m;
  m.fpr = ratio(c.fp, c.fp + c.tn);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1_pos = f1(m.precision, m.recall);
  // Negative class: non-clones / non-mappings treated as the positive label.
  m.f1_neg = f1(ratio(c.tn, c.tn + c.fn), ratio(c.tn, c.tn + c.fp));
  m.avg_f1 = (m.f1_pos + m.f1_neg) / 2.0;
  return m;
}

Evaluation evaluate(const std::set<PairKey>& predicted_kept, const std::vector<LabeledPair>& dataset, Task task,
                    std::optional<CodeType> only) {
  Evaluation e;
  for (const auto& lp : dataset) {
    if (only && lp.code_type != *only) continue;
    const bool predicted = predicted_kept.count(lp.pair) > 0;
    const bool actual = lp.positive(task);
    if (predicted && actual) ++e.counts.tp;
    else if (predicted) ++e.counts.fp;
    else if (actual) ++e.counts.fn;
    else ++e.counts.tn;
  }
  e.metrics = metrics_from(e.counts);
  return e;
}

SweepResult sweep(const std::vector<MappingResult>& scored, const std::vector<LabeledPair>& dataset, Task task,
                  const std::vector<double>& thresholds, std::optional<CodeType> only) {
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i] > thresholds[i - 1])) throw UsageError("sweep thresholds must be strictly increasing");
  SweepResult out;
  out.points.resize(thresholds.size());
  parallel_for(thresholds.size(), [&](std::size_t i) {
    std::set<PairKey> kept;
    for (const auto& r : scored)
      if (r.breakdown.sas >= thresholds[i] - kScoreSlack) kept.insert(r.pair);
    const Evaluation e = evaluate(kept, dataset, task, only);
    out.points[i] = {thresholds[i], e.counts, e.metrics};
  });
  for (std::size_t i = 0; i < out.points.size(); ++i)
    if (!out.best || out.points[i].metrics.avg_f1 > out.points[*out.best].metrics.avg_f1 + 1e-12) out.best = i;
  return out;
}

std::vector<double> threshold_ladder(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw UsageError("invalid threshold ladder");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
  return out;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = csv::format_row({"threshold", "fpr", "precision", "recall", "f1_pos", "f1_neg", "avg_f1"});
  for (const auto& p : result.points) {
    const auto& m = p.metrics;
    out += csv::format_row({json(p.threshold).dump(), json(m.fpr).dump(), json(m.precision).dump(),
                            json(m.recall).dump(), json(m.f1_pos).dump(), json(m.f1_neg).dump(),
                            json(m.avg_f1).dump()});
  }
  return out;
}

namespace {

std::map<PairKey, long> ranks_of(std::vector<const MappingResult*> group) {
  std::sort(group.begin(), group.end(), [](const MappingResult* a, const MappingResult* b) {
    if (a->breakdown.sas != b->breakdown.sas) return a->breakdown.sas > b->breakdown.sas;
    return a->pair < b->pair;
  });
  std::map<PairKey, long> ranks;
  for (std::size_t i = 0; i < group.size(); ++i) ranks[group[i]->pair] = static_cast<long>(i) + 1;
  return ranks;
}

ImpactStats impact_for(const std::vector<const MappingResult*>& all, const std::map<PairKey, const MappingResult*>& ex_by_key) {
  ImpactStats s;
  s.pairs = all.size();
  std::vector<const MappingResult*> ex;
  for (const auto* r : all) ex.push_back(ex_by_key.at(r->pair));
  const auto rank_all = ranks_of(all);
  const auto rank_ex = ranks_of(ex);
  auto bigger = [](double cand, double cur) {
    return std::abs(cand) > std::abs(cur) + 1e-12 || (std::abs(std::abs(cand) - std::abs(cur)) <= 1e-12 && cand > cur);
  };
  for (const auto* r : all) {
    const double delta = r->breakdown.sas - ex_by_key.at(r->pair)->breakdown.sas;
    if (std::abs(delta) > kScoreSlack) ++s.affected;
    if (bigger(delta, s.max_sas_change)) s.max_sas_change = delta;
    const long rank_delta = rank_all.at(r->pair) - rank_ex.at(r->pair);
    if (std::abs(rank_delta) > std::abs(s.max_rank_change) ||
        (std::abs(rank_delta) == std::abs(s.max_rank_change) && rank_delta > s.max_rank_change))
      s.max_rank_change = rank_delta;
  }
  return s;
}

}  // namespace

ImpactReport rule_impact(const std::vector<MappingResult>& scored_all, const std::vector<MappingResult>& scored_ex) {
  std::map<PairKey, const MappingResult*> ex_by_key;
  for (const auto& r : scored_ex) ex_by_key[r.pair] = &r;
  std::set<PairKey> all_keys;
  for (const auto& r : scored_all) all_keys.insert(r.pair);
  if (all_keys.size() != scored_all.size() || ex_by_key.size() != scored_ex.size())
    throw std::runtime_error("impact: duplicate pairs in a scored run");
  if (all_keys.size() != ex_by_key.size() ||
      !std::all_of(all_keys.begin(), all_keys.end(), [&](const PairKey& k) { return ex_by_key.count(k) > 0; }))
    throw std::runtime_error("impact: the two scored runs cover different pair sets");

  std::vector<const MappingResult*> all, prod, test;
  for (const auto& r : scored_all) {
    all.push_back(&r);
    (r.code_type == CodeType::Production ? prod : test).push_back(&r);
  }
  return {impact_for(all, ex_by_key), impact_for(prod, ex_by_key), impact_for(test, ex_by_key)};
}

namespace {

bool example_before(double sa, const PairKey& ka, double sb, const PairKey& kb) {
  if (sa != sb) return sa > sb;
  return ka < kb;
}

std::size_t count_top_k(const std::vector<double>& scores, const std::vector<TrainingExample>& ex, std::size_t k,
                        std::vector<std::size_t>& order) {
  std::iota(order.begin(), order.end(), std::size_t{0});
  k = std::min(k, order.size());
  auto cmp = [&](std::size_t a, std::size_t b) { return example_before(scores[a], ex[a].pair, scores[b], ex[b].pair); };
  std::nth_element(order.begin(), order.begin() + static_cast<long>(k), order.end(), cmp);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < k; ++i) tp += ex[order[i]].positive ? 1 : 0;
  return tp;
}

}  // namespace

std::size_t top_k_true_positives(const std::vector<TrainingExample>& examples, const WeightConfig& w, std::size_t k,
                                 const AbsentPolicy& absent, Ablation ablation) {
  std::vector<double> scores;
  scores.reserve(examples.size());
  for (const auto& e : examples) scores.push_back(score(e.fields, w, ablation, absent).sas);
  std::vector<std::size_t> order(examples.size());
  return count_top_k(scores, examples, k, order);
}

TuneResult tune(const std::vector<TrainingExample>& training, const TunerConfig& cfg) {
  if (training.empty()) throw std::runtime_error("tune: empty training set");
  const auto positives = static_cast<std::size_t>(
      std::count_if(training.begin(), training.end(), [](const TrainingExample& e) { return e.positive; }));
  if (positives == 0) throw std::runtime_error("tune: training set has no positives");
  if (!(cfg.grid_step > 0.0 && cfg.grid_step <= 1.0)) throw UsageError("grid step must lie in (0,1]");
  const long n = std::lround(1.0 / cfg.grid_step);
  if (std::abs(static_cast<double>(n) * cfg.grid_step - 1.0) > 1e-9)
    throw UsageError("grid step must divide 1 evenly");
  const std::size_t k = cfg.k.value_or(positives);

  // Per-detail similarities are weight independent; only the header and the
  // final weighted sum change across grid points.
  std::vector<SASBreakdown> base;
  base.reserve(training.size());
  for (const auto& e : training) base.push_back(components(e.fields, WeightConfig{}, cfg.ablation, cfg.absent));

  std::vector<std::array<long, 3>> simplex;
  for (long i = 0; i <= n; ++i)
    for (long j = 0; i + j <= n; ++j) simplex.push_back({i, j, n - i - j});

  struct Candidate {
    std::size_t tp = 0;
    long min_weight = -1;
    std::array<long, 6> w{};
    std::size_t optimal = 0;
  };
  auto better = [](const Candidate& a, const Candidate& b) {
    return std::tie(a.tp, a.min_weight, a.w) > std::tie(b.tp, b.min_weight, b.w);
  };

  std::vector<Candidate> per_header(simplex.size());
  parallel_for(simplex.size(), [&](std::size_t h) {
    const auto& hw = simplex[h];
    WeightConfig w;
    w.delta = static_cast<double>(hw[0]) / n;
    w.eta = static_cast<double>(hw[1]) / n;
    w.phi = static_cast<double>(hw[2]) / n;
    std::vector<SASBreakdown> local = base;
    for (std::size_t e = 0; e < training.size(); ++e) {
      const FieldSims& f = local[e].fields;
      local[e].sim_method_header = cfg.ablation == Ablation::Exr2
                                       ? 0.0
                                       : w.delta * f.method_name.value_or(0.0) + w.eta * f.return_type.value_or(0.0) +
                                             w.phi * f.param.value_or(cfg.absent.params_absent);
    }
    std::vector<double> scores(training.size());
    std::vector<std::size_t> order(training.size());
    Candidate best;
    for (const auto& cw : simplex) {
      w.alpha = static_cast<double>(cw[0]) / n;
      w.beta = static_cast<double>(cw[1]) / n;
      w.theta = static_cast<double>(cw[2]) / n;
      for (std::size_t e = 0; e < training.size(); ++e) scores[e] = sas(local[e], w, cfg.absent);
      Candidate c;
      c.tp = count_top_k(scores, training, k, order);
      c.w = {cw[0], cw[1], cw[2], hw[0], hw[1], hw[2]};
      c.min_weight = *std::min_element(c.w.begin(), c.w.end());
      if (best.min_weight < 0 || c.tp > best.tp) {
        c.optimal = 1;
        best = c;
      } else if (c.tp == best.tp) {
        const std::size_t opt = best.optimal + 1;
        if (better(c, best)) best = c;
        best.optimal = opt;
      }
    }
    per_header[h] = best;
  });

  Candidate best = per_header.front();
  std::size_t optimal = 0;
  for (const auto& c : per_header)
    if (better(c, best)) best = c;
  for (const auto& c : per_header)
    if (c.tp == best.tp) optimal += c.optimal;

  TuneResult out;
  out.weights = {static_cast<double>(best.w[0]) / n, static_cast<double>(best.w[1]) / n,
                 static_cast<double>(best.w[2]) / n, static_cast<double>(best.w[3]) / n,
                 static_cast<double>(best.w[4]) / n, static_cast<double>(best.w[5]) / n};
  out.k = k;
  out.top_k_tp = best.tp;
  out.grid_points = simplex.size() * simplex.size();
  out.optimal_points = optimal;
  return out;
}

}  // namespace remap
