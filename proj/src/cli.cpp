#include "remap/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json_fwd.hpp"
#include "remap/evalkit.hpp"
#include "remap/extractor.hpp"
#include "remap/ingest.hpp"
#include "remap/manifest.hpp"
#include "remap/mapper.hpp"
#include "remap/normalizer.hpp"
#include "remap/prefilter.hpp"
#include "remap/util.hpp"

namespace remap::cli {

namespace fs = std::filesystem;

namespace {

std::optional<fs::path> config_dir() {
  const char* env = std::getenv("REMAP_CONFIG_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return fs::path(env);
}

struct LoadedRules {
  RuleSet rules;
  std::string source;
};

// A rules argument is a file path, a name under $REMAP_CONFIG_DIR/rules, or a
// bundled rule set name.
LoadedRules resolve_rules(const std::string& ref) {
  if (fs::is_regular_file(ref)) return {load_rules(ref), read_file(ref)};
  if (auto dir = config_dir()) {
    const fs::path candidate = *dir / "rules" / (ref + ".json");
    if (fs::is_regular_file(candidate)) return {load_rules(candidate), read_file(candidate)};
  }
  const auto names = builtin_rule_names();
  if (std::find(names.begin(), names.end(), ref) == names.end())
    throw UsageError("unknown rule set: " + ref);
  RuleSet rules = builtin_rules(ref);
  return {rules, rules_to_json(rules)};
}

struct LoadedWeights {
  WeightConfig weights;
  AbsentPolicy absent;
  std::string source;
};

std::string weights_to_json(const WeightConfig& w, const AbsentPolicy& absent) {
  json j;
  j["alpha"] = w.alpha;
  j["beta"] = w.beta;
  j["theta"] = w.theta;
  j["delta"] = w.delta;
  j["eta"] = w.eta;
  j["phi"] = w.phi;
  j["renormalize_missing_optional"] = absent.renormalize_missing_optional;
  return j.dump(2) + "\n";
}

LoadedWeights parse_weights(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(origin + ": invalid weights JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError(origin + ": weights must be a JSON object");
  LoadedWeights out;
  out.source = text;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    double* slot = key == "alpha"   ? &out.weights.alpha
                   : key == "beta"  ? &out.weights.beta
                   : key == "theta" ? &out.weights.theta
                   : key == "delta" ? &out.weights.delta
                   : key == "eta"   ? &out.weights.eta
                   : key == "phi"   ? &out.weights.phi
                                    : nullptr;
    if (slot != nullptr) {
      if (!it->is_number()) throw UsageError(origin + ": weight " + key + " must be a number");
      *slot = it->get<double>();
    } else if (key == "renormalize_missing_optional") {
      if (!it->is_boolean()) throw UsageError(origin + ": " + key + " must be a boolean");
      out.absent.renormalize_missing_optional = it->get<bool>();
    } else {
      throw UsageError(origin + ": unknown weights field " + key);
    }
  }
  out.weights.validate();
  return out;
}

LoadedWeights resolve_weights(const std::string& ref) {
  if (ref.empty() || ref == "default") {
    LoadedWeights out;
    out.source = weights_to_json(out.weights, out.absent);
    return out;
  }
  if (fs::is_regular_file(ref)) return parse_weights(read_file(ref), ref);
  if (auto dir = config_dir()) {
    const fs::path candidate = *dir / "weights" / (ref + ".json");
    if (fs::is_regular_file(candidate)) return parse_weights(read_file(candidate), candidate.string());
  }
  throw UsageError("weights not found: " + ref);
}

void emit(const fs::path& out_path, const std::string& content, RunManifest& manifest) {
  write_file(out_path, content);
  manifest.outputs.push_back(out_path.string());
  manifest.finished_at = utc_timestamp();
  write_manifest(manifest, out_path);
}

json counts_json(const ConfusionCounts& c) { return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}}; }

json metrics_json(const MetricsReport& m) {
  return {{"fpr", m.fpr},         {"precision", m.precision}, {"recall", m.recall},
          {"f1_pos", m.f1_pos},   {"f1_neg", m.f1_neg},       {"avg_f1", m.avg_f1}};
}

json evaluation_json(const Evaluation& e) { return {{"counts", counts_json(e.counts)}, {"metrics", metrics_json(e.metrics)}}; }

json summary_json(const Summary& s) { return {{"orig", s.orig}, {"filt", s.filt}, {"out_pct", s.out_pct}}; }

json impact_json(const ImpactStats& s) {
  return {{"pairs", s.pairs},
          {"affected", s.affected},
          {"max_sas_change", s.max_sas_change},
          {"max_rank_change", s.max_rank_change}};
}

std::set<PairKey> kept_keys(const std::vector<MappingResult>& results) {
  std::set<PairKey> keys;
  for (const auto& r : results)
    if (r.kept) keys.insert(r.pair);
  return keys;
}

json evaluation_by_code_type(const std::set<PairKey>& kept, const std::vector<LabeledPair>& dataset, Task task) {
  return {{"overall", evaluation_json(evaluate(kept, dataset, task))},
          {"production", evaluation_json(evaluate(kept, dataset, task, CodeType::Production))},
          {"test", evaluation_json(evaluate(kept, dataset, task, CodeType::Test))}};
}

// Options shared by every command that scores pairs.
struct ScoringOptions {
  std::string left;
  std::string right;
  std::string profile = "generic";
  std::string rules;
  std::string weights = "default";
  std::string task = "cm";
  std::optional<double> threshold;

  void attach(CLI::App* cmd, bool with_threshold = true) {
    cmd->add_option("--left", left, "Original-project snapshot (JSONL)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--right", right, "Redesigned-project snapshot (JSONL)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--profile", profile, "soot-sootup | findbugs-spotbugs | generic")->capture_default_str();
    cmd->add_option("--rules", rules, "Rule set name or file (overrides the profile's rules)");
    cmd->add_option("--weights", weights, "Weights file or name")->capture_default_str();
    cmd->add_option("--task", task, "gc | cm")->capture_default_str();
    if (with_threshold) cmd->add_option("--threshold", threshold, "SAS threshold (defaults to the profile's)");
  }

  FilterConfig build(RunManifest& manifest) const {
    const Profile prof = remap::profile(profile);
    FilterConfig cfg;
    cfg.task = parse_task(task);
    cfg.thres_sas = threshold.value_or(prof.threshold(cfg.task));
    const LoadedRules loaded = resolve_rules(rules.empty() ? prof.rules : rules);
    cfg.rules = loaded.rules;
    const LoadedWeights w = resolve_weights(weights);
    cfg.weights = w.weights;
    cfg.absent = w.absent;
    cfg.validate();
    manifest.hash_config("rules", loaded.source);
    manifest.hash_config("weights", w.source);
    manifest.counters["threshold_millis"] = std::llround(cfg.thres_sas * 1000.0);
    return cfg;
  }
};

std::pair<ProjectSnapshot, ProjectSnapshot> load_snapshots(const ScoringOptions& o, RunManifest& manifest) {
  ProjectSnapshot l = load_snapshot(o.left);
  ProjectSnapshot r = load_snapshot(o.right);
  if (l.role != ProjectRole::Original) throw UsageError(o.left + " is not an original-project snapshot");
  if (r.role != ProjectRole::Redesigned) throw UsageError(o.right + " is not a redesigned-project snapshot");
  manifest.inputs.push_back(o.left);
  manifest.inputs.push_back(o.right);
  return {std::move(l), std::move(r)};
}

// Per-field similarities for labeled pairs, computed with weight-independent
// scoring under the full rule set.
std::vector<TrainingExample> training_examples(const std::vector<LabeledPair>& labeled, const ProjectSnapshot& l,
                                               const ProjectSnapshot& r, const FilterConfig& cfg) {
  std::vector<CandidatePair> pairs;
  for (const auto& lp : labeled) pairs.push_back({lp.pair.left, lp.pair.right, ProvenanceKind::Detector, "dataset", ""});
  FilterConfig all = cfg;
  all.ablation = Ablation::All;
  const auto scored = score_pairs(pairs, l, r, all);
  std::map<PairKey, const FieldSims*> by_key;
  for (const auto& s : scored) by_key[s.pair] = &s.breakdown.fields;
  std::vector<TrainingExample> out;
  for (const auto& lp : labeled) out.push_back({lp.pair, *by_key.at(lp.pair), lp.positive(cfg.task)});
  return out;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"remap: rank method-level code mappings between an original and a redesigned project"};
    app.name("remap");
    app.set_version_flag("--version", "remap " + tool_version());
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

    setup_extract(app);
    setup_normalize(app);
    setup_pairs(app);
    setup_ingest(app);
    setup_score(app);
    setup_eval(app);
    setup_sweep(app);
    setup_ablate(app);
    setup_impact(app);
    setup_tune(app);
    setup_config(app);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        std::ostringstream ignored;
        app.exit(e, out_, ignored);
        return kExitOk;
      }
      return fail(kExitUsage, "usage", e.what());
    }

    set_thread_count(threads);
    manifest_.tool_version = tool_version();
    manifest_.argv = args;
    manifest_.started_at = utc_timestamp();
    try {
      for (auto* sub : app.get_subcommands()) {
        manifest_.command = sub->get_name();
        handlers_.at(sub->get_name())(sub);
      }
    } catch (const UsageError& e) {
      return fail(kExitUsage, "usage", e.what());
    } catch (const std::exception& e) {
      return fail(kExitRuntime, "runtime", e.what());
    }
    return kExitOk;
  }

 private:
  int fail(int code, const std::string& kind, const std::string& message) {
    json j;
    j["error"] = {{"kind", kind}, {"exit_code", code}, {"message", message}};
    err_ << j.dump() << "\n";
    return code;
  }

  CLI::App* command(CLI::App& app, const std::string& name, const std::string& help,
                    std::function<void(CLI::App*)> handler) {
    handlers_[name] = std::move(handler);
    return app.add_subcommand(name, help);
  }

  void setup_extract(CLI::App& app) {
    struct Opts {
      std::string root, role = "original", name, out;
      std::vector<std::string> test_roots{"src/test/"};
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "extract", "Extract method records from a Java source tree", [this, o](CLI::App*) {
      ExtractOptions opts;
      opts.test_roots = o->test_roots;
      const ProjectRole role = parse_role(o->role);
      const std::string name = o->name.empty() ? fs::path(o->root).filename().string() : o->name;
      const ProjectSnapshot snap = extract(o->root, role, name, opts);
      save_snapshot(snap, o->out);
      manifest_.inputs.push_back(o->root);
      manifest_.outputs.push_back(sidecar_path(o->out).string());
      manifest_.counters["files_parsed"] = static_cast<long long>(snap.files_parsed);
      manifest_.counters["methods"] = static_cast<long long>(snap.records.size());
      manifest_.counters["classes"] = static_cast<long long>(snap.class_index.size());
      manifest_.counters["diagnostics"] = static_cast<long long>(snap.diagnostics.size());
      std::string roots;
      for (const auto& t : o->test_roots) roots += t + "\n";
      manifest_.hash_config("test_roots", roots);
      manifest_.outputs.push_back(o->out);
      manifest_.finished_at = utc_timestamp();
      write_manifest(manifest_, o->out);
    });
    cmd->add_option("--root", o->root, "Project source root")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("--test-root", o->test_roots, "Path prefix marking test code (repeatable)")->capture_default_str();
    cmd->add_option("--role", o->role, "original | redesigned")->capture_default_str();
    cmd->add_option("--name", o->name, "Project identifier (defaults to the root directory name)");
    cmd->add_option("--out", o->out, "Snapshot JSONL path")->required();
  }

  void setup_normalize(CLI::App& app) {
    struct Opts {
      std::string snapshot, rules = "none", out;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "normalize", "Write the normalized token sequences of a snapshot", [this, o](CLI::App*) {
      const ProjectSnapshot snap = load_snapshot(o->snapshot);
      const LoadedRules loaded = resolve_rules(o->rules);
      std::vector<NormalizedDetails> details(snap.records.size());
      parallel_for(snap.records.size(), [&](std::size_t i) {
        const auto& rec = snap.records[i];
        details[i] = normalize_record(rec, snap.class_of(rec), snap.role, loaded.rules);
      });
      std::string body;
      for (std::size_t i = 0; i < details.size(); ++i) {
        const auto& d = details[i];
        json j;
        j["id"] = snap.records[i].id;
        j["class_name"] = d.class_name;
        j["class_doc"] = d.class_doc;
        j["method_name"] = d.method_name;
        j["return_type"] = d.return_type;
        j["params"] = d.params;
        j["local_vars"] = d.local_vars;
        j["method_doc"] = d.method_doc;
        j["comments"] = d.comments;
        body += j.dump() + "\n";
      }
      manifest_.inputs.push_back(o->snapshot);
      manifest_.hash_config("rules", loaded.source);
      manifest_.counters["methods"] = static_cast<long long>(details.size());
      emit(o->out, body, manifest_);
    });
    cmd->add_option("--snapshot", o->snapshot, "Snapshot JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--rules", o->rules, "Rule set name or file")->capture_default_str();
    cmd->add_option("--out", o->out, "Output JSONL")->required();
  }

  void setup_pairs(CLI::App& app) {
    struct Opts {
      std::string left, right, mode = "prefilter", rules = "none", out;
      PrefilterConfig cfg;
      int min_loc = 5;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "pairs", "Generate candidate method pairs", [this, o](CLI::App*) {
      ScoringOptions so;
      so.left = o->left;
      so.right = o->right;
      auto [l, r] = load_snapshots(so, manifest_);
      std::vector<CandidatePair> pairs;
      if (o->mode == "exhaustive") {
        pairs = exhaustive_pairs(l, r, o->min_loc);
        manifest_.counters["min_loc"] = o->min_loc;
      } else {
        o->cfg.validate();
        const LoadedRules loaded = resolve_rules(o->rules);
        manifest_.hash_config("rules", loaded.source);
        const auto classes = filter_classes(l, r, loaded.rules, o->cfg);
        const auto embedder = make_embedder(o->cfg.embedding_provider, loaded.rules);
        pairs = generate_pairs(classes, l, r, o->cfg, *embedder);
        manifest_.counters["class_pairs"] = static_cast<long long>(classes.size());
        json c = {{"class_sim", o->cfg.class_sim_threshold},
                  {"line_ratio", o->cfg.line_ratio_cutoff},
                  {"embed_threshold", o->cfg.embed_threshold},
                  {"embedder", o->cfg.embedding_provider}};
        manifest_.hash_config("prefilter", c.dump());
      }
      manifest_.counters["pairs_out"] = static_cast<long long>(pairs.size());
      emit(o->out, pairs_to_jsonl(pairs), manifest_);
    });
    cmd->add_option("--left", o->left, "Original-project snapshot")->required()->check(CLI::ExistingFile);
    cmd->add_option("--right", o->right, "Redesigned-project snapshot")->required()->check(CLI::ExistingFile);
    cmd->add_option("--mode", o->mode, "prefilter | exhaustive")
        ->check(CLI::IsMember({"prefilter", "exhaustive"}))
        ->capture_default_str();
    cmd->add_option("--class-sim", o->cfg.class_sim_threshold, "Class-name similarity threshold")->capture_default_str();
    cmd->add_option("--line-ratio", o->cfg.line_ratio_cutoff, "Line-count ratio cutoff")->capture_default_str();
    cmd->add_option("--embed-threshold", o->cfg.embed_threshold, "Embedding cosine threshold")->capture_default_str();
    cmd->add_option("--embedder", o->cfg.embedding_provider, "Embedding provider name")->capture_default_str();
    cmd->add_option("--rules", o->rules, "Rule set name or file")->capture_default_str();
    cmd->add_option("--min-loc", o->min_loc, "Minimum method length for exhaustive pairing")->capture_default_str();
    cmd->add_option("--out", o->out, "Pair JSONL")->required();
  }

  void setup_ingest(CLI::App& app) {
    struct Opts {
      std::string format = "generic", input, left, right, out;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "ingest", "Resolve detector-reported clone pairs to method ids", [this, o](CLI::App*) {
      ScoringOptions so;
      so.left = o->left;
      so.right = o->right;
      auto [l, r] = load_snapshots(so, manifest_);
      IngestStats stats;
      const auto pairs = o->format == "generic" ? ingest_generic(o->input, l, r, &stats)
                                                : ingest_nicad_xml(o->input, l, r, &stats);
      manifest_.inputs.push_back(o->input);
      manifest_.counters["lines"] = static_cast<long long>(stats.lines);
      manifest_.counters["malformed"] = static_cast<long long>(stats.malformed);
      manifest_.counters["unresolved_fragments"] = static_cast<long long>(stats.unresolved_fragments);
      manifest_.counters["unresolved_pairs"] = static_cast<long long>(stats.unresolved_pairs);
      manifest_.counters["same_project"] = static_cast<long long>(stats.same_project);
      manifest_.counters["duplicates"] = static_cast<long long>(stats.duplicates);
      manifest_.counters["pairs_out"] = static_cast<long long>(stats.emitted);
      for (const auto& d : stats.diagnostics) err_ << d << "\n";
      emit(o->out, pairs_to_jsonl(pairs), manifest_);
    });
    cmd->add_option("--format", o->format, "generic | nicad-xml")
        ->check(CLI::IsMember({"generic", "nicad-xml"}))
        ->capture_default_str();
    cmd->add_option("--input", o->input, "Detector report")->required()->check(CLI::ExistingFile);
    cmd->add_option("--left", o->left, "Original-project snapshot")->required()->check(CLI::ExistingFile);
    cmd->add_option("--right", o->right, "Redesigned-project snapshot")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o->out, "Pair JSONL")->required();
  }

  void setup_score(CLI::App& app) {
    struct Opts {
      ScoringOptions scoring;
      std::string pairs, out, format = "jsonl", ablation = "all";
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "score", "Score candidate pairs with SAS and apply the threshold", [this, o](CLI::App*) {
      FilterConfig cfg = o->scoring.build(manifest_);
      cfg.ablation = parse_ablation(o->ablation);
      const ReportFormat fmt = parse_report_format(o->format);
      auto [l, r] = load_snapshots(o->scoring, manifest_);
      const auto pairs = load_pairs(o->pairs);
      manifest_.inputs.push_back(o->pairs);
      const auto results = score_pairs(pairs, l, r, cfg);
      const Summary s = summarize(results);
      manifest_.counters["pairs_in"] = static_cast<long long>(pairs.size());
      manifest_.counters["pairs_scored"] = static_cast<long long>(s.orig);
      manifest_.counters["pairs_kept"] = static_cast<long long>(s.filt);
      emit(o->out, report(results, fmt, cfg.thres_sas), manifest_);
    });
    o->scoring.attach(cmd);
    cmd->add_option("--pairs", o->pairs, "Pair JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--ablation", o->ablation, "all | exr1 | exr2 | exr3 | exr4")->capture_default_str();
    cmd->add_option("--format", o->format, "jsonl | csv | summary")->capture_default_str();
    cmd->add_option("--out", o->out, "Output path")->required();
  }

  void setup_eval(CLI::App& app) {
    struct Opts {
      std::string scores, dataset, task = "cm", out;
      std::optional<double> threshold;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "eval", "Evaluate scored pairs against a labeled dataset", [this, o](CLI::App*) {
      const Task task = parse_task(o->task);
      auto results = load_results(o->scores);
      if (o->threshold) apply_threshold(results, *o->threshold);
      const auto dataset = load_dataset(o->dataset);
      manifest_.inputs = {o->scores, o->dataset};
      manifest_.counters["dataset_pairs"] = static_cast<long long>(dataset.size());
      json j;
      j["task"] = to_string(task);
      if (o->threshold) j["threshold"] = *o->threshold;
      j["evaluation"] = evaluation_by_code_type(kept_keys(results), dataset, task);
      emit(o->out, j.dump(2) + "\n", manifest_);
    });
    cmd->add_option("--scores", o->scores, "Scored JSONL from `remap score`")->required()->check(CLI::ExistingFile);
    cmd->add_option("--dataset", o->dataset, "Labeled dataset CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--task", o->task, "gc | cm")->capture_default_str();
    cmd->add_option("--threshold", o->threshold, "Re-threshold the scores before evaluating");
    cmd->add_option("--out", o->out, "Report JSON")->required();
  }

  void setup_sweep(CLI::App& app) {
    struct Opts {
      std::string scores, dataset, task = "cm", out, csv, code_type = "all";
      double from = 0.0, to = 1.0, step = 0.05;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "sweep", "Evaluate a ladder of SAS thresholds", [this, o](CLI::App*) {
      const Task task = parse_task(o->task);
      std::optional<CodeType> only;
      if (o->code_type != "all") only = parse_code_type(o->code_type);
      const auto results = load_results(o->scores);
      const auto dataset = load_dataset(o->dataset);
      const auto ladder = threshold_ladder(o->from, o->to, o->step);
      const SweepResult sw = sweep(results, dataset, task, ladder, only);
      manifest_.inputs = {o->scores, o->dataset};
      manifest_.counters["thresholds"] = static_cast<long long>(ladder.size());
      json j;
      j["task"] = to_string(task);
      j["code_type"] = o->code_type;
      j["points"] = json::array();
      for (const auto& p : sw.points)
        j["points"].push_back({{"threshold", p.threshold}, {"counts", counts_json(p.counts)}, {"metrics", metrics_json(p.metrics)}});
      j["best_threshold"] = sw.best ? json(sw.points[*sw.best].threshold) : json(nullptr);
      if (!o->csv.empty()) {
        write_file(o->csv, sweep_to_csv(sw));
        manifest_.outputs.push_back(o->csv);
      }
      emit(o->out, j.dump(2) + "\n", manifest_);
    });
    cmd->add_option("--scores", o->scores, "Scored JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--dataset", o->dataset, "Labeled dataset CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--task", o->task, "gc | cm")->capture_default_str();
    cmd->add_option("--code-type", o->code_type, "all | production | test")->capture_default_str();
    cmd->add_option("--from", o->from, "Lowest threshold")->capture_default_str();
    cmd->add_option("--to", o->to, "Highest threshold")->capture_default_str();
    cmd->add_option("--step", o->step, "Threshold increment")->capture_default_str();
    cmd->add_option("--csv", o->csv, "Also write a plottable CSV");
    cmd->add_option("--out", o->out, "Report JSON")->required();
  }

  void setup_ablate(CLI::App& app) {
    struct Opts {
      ScoringOptions scoring;
      std::string pairs, dataset, out;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "ablate", "Score under every ablation setting and compare", [this, o](CLI::App*) {
      const FilterConfig base = o->scoring.build(manifest_);
      auto [l, r] = load_snapshots(o->scoring, manifest_);
      const auto pairs = load_pairs(o->pairs);
      manifest_.inputs.push_back(o->pairs);
      std::vector<LabeledPair> dataset;
      if (!o->dataset.empty()) {
        dataset = load_dataset(o->dataset);
        manifest_.inputs.push_back(o->dataset);
      }
      json j;
      j["task"] = to_string(base.task);
      j["threshold"] = base.thres_sas;
      j["settings"] = json::array();
      std::vector<MappingResult> all;
      for (Ablation a : {Ablation::All, Ablation::Exr1, Ablation::Exr2, Ablation::Exr3, Ablation::Exr4}) {
        FilterConfig cfg = base;
        cfg.ablation = a;
        const auto results = score_pairs(pairs, l, r, cfg);
        json s;
        s["ablation"] = to_string(a);
        s["summary"] = {{"total", summary_json(summarize(results))},
                        {"production", summary_json(summarize(results, CodeType::Production))},
                        {"test", summary_json(summarize(results, CodeType::Test))}};
        if (!o->dataset.empty()) s["evaluation"] = evaluation_by_code_type(kept_keys(results), dataset, base.task);
        if (a == Ablation::All) {
          all = results;
        } else {
          const ImpactReport imp = rule_impact(all, results);
          s["impact"] = {{"overall", impact_json(imp.overall)},
                         {"production", impact_json(imp.production)},
                         {"test", impact_json(imp.test)}};
        }
        j["settings"].push_back(s);
      }
      manifest_.counters["pairs_in"] = static_cast<long long>(pairs.size());
      emit(o->out, j.dump(2) + "\n", manifest_);
    });
    o->scoring.attach(cmd);
    cmd->add_option("--pairs", o->pairs, "Pair JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--dataset", o->dataset, "Optional labeled dataset CSV")->check(CLI::ExistingFile);
    cmd->add_option("--out", o->out, "Report JSON")->required();
  }

  void setup_impact(CLI::App& app) {
    struct Opts {
      std::string all, ex, out;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "impact", "Compare a full run against an ablated run", [this, o](CLI::App*) {
      const auto all = load_results(o->all);
      const auto ex = load_results(o->ex);
      const ImpactReport imp = rule_impact(all, ex);
      manifest_.inputs = {o->all, o->ex};
      json j;
      j["ablation"] = ex.empty() ? "ALL" : to_string(ex.front().breakdown.ablation);
      j["overall"] = impact_json(imp.overall);
      j["production"] = impact_json(imp.production);
      j["test"] = impact_json(imp.test);
      emit(o->out, j.dump(2) + "\n", manifest_);
    });
    cmd->add_option("--all", o->all, "Scored JSONL under ALL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--ex", o->ex, "Scored JSONL under one EXR setting")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o->out, "Report JSON")->required();
  }

  void setup_tune(CLI::App& app) {
    struct Opts {
      ScoringOptions scoring;
      std::string training, out;
      double grid_step = 0.05;
      std::optional<std::size_t> k;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "tune", "Grid-search SAS weights on a labeled training split", [this, o](CLI::App*) {
      const FilterConfig cfg = o->scoring.build(manifest_);
      auto [l, r] = load_snapshots(o->scoring, manifest_);
      const auto labeled = load_dataset(o->training);
      manifest_.inputs.push_back(o->training);
      TunerConfig tc;
      tc.grid_step = o->grid_step;
      tc.k = o->k;
      tc.absent = cfg.absent;
      const TuneResult res = tune(training_examples(labeled, l, r, cfg), tc);
      manifest_.counters["training_pairs"] = static_cast<long long>(labeled.size());
      manifest_.counters["grid_points"] = static_cast<long long>(res.grid_points);
      json j = json::parse(weights_to_json(res.weights, tc.absent));
      j.erase("renormalize_missing_optional");
      json report;
      report["weights"] = j;
      report["k"] = res.k;
      report["top_k_tp"] = res.top_k_tp;
      report["grid_step"] = tc.grid_step;
      report["grid_points"] = res.grid_points;
      report["optimal_points"] = res.optimal_points;
      emit(o->out, report.dump(2) + "\n", manifest_);
    });
    o->scoring.attach(cmd, false);
    cmd->add_option("--training", o->training, "Labeled training split (dataset CSV)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--grid-step", o->grid_step, "Simplex grid step (must divide 1)")->capture_default_str();
    cmd->add_option("--k", o->k, "Top-K size (defaults to the number of positives)");
    cmd->add_option("--out", o->out, "Report JSON")->required();
  }

  void setup_config(CLI::App& app) {
    struct Opts {
      std::string rules, weights;
      bool list = false;
    };
    auto o = std::make_shared<Opts>();
    auto* cmd = command(app, "config", "Print bundled or configured rule sets and weights", [this, o](CLI::App*) {
      if (o->list) {
        json j;
        j["rules"] = builtin_rule_names();
        j["embedders"] = embedder_names();
        j["profiles"] = {"soot-sootup", "findbugs-spotbugs", "generic"};
        if (auto dir = config_dir()) j["config_dir"] = dir->string();
        out_ << j.dump(2) << "\n";
      }
      if (!o->rules.empty()) out_ << rules_to_json(resolve_rules(o->rules).rules);
      if (!o->weights.empty()) {
        const LoadedWeights w = resolve_weights(o->weights);
        out_ << weights_to_json(w.weights, w.absent);
      }
      if (!o->list && o->rules.empty() && o->weights.empty())
        throw UsageError("config: pass --list, --rules <name> or --weights <name>");
    });
    cmd->add_flag("--list", o->list, "List bundled names");
    cmd->add_option("--rules", o->rules, "Print a rule set as JSON");
    cmd->add_option("--weights", o->weights, "Print a weights config as JSON");
  }

  std::ostream& out_;
  std::ostream& err_;
  RunManifest manifest_;
  std::map<std::string, std::function<void(CLI::App*)>> handlers_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Runner(out, err).run(args);
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace remap::cli
