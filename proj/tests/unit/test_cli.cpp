#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "json_fwd.hpp"
#include "remap/cli.hpp"
#include "remap/normalizer.hpp"
#include "remap/util.hpp"
#include "test_support.hpp"

namespace remap {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json error_of(const Outcome& o) {
  const auto lines = split_lines(o.err);
  EXPECT_FALSE(lines.empty());
  return json::parse(lines.back()).at("error");
}

TEST(Cli, VersionExitsZero) {
  const auto o = run_cli({"--version"});
  EXPECT_EQ(o.code, cli::kExitOk);
  EXPECT_NE(o.out.find("remap"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  const auto o = run_cli({"score", "--bogus"});
  EXPECT_EQ(o.code, cli::kExitUsage);
  const auto e = error_of(o);
  EXPECT_EQ(e.at("kind"), "usage");
  EXPECT_EQ(e.at("exit_code"), 2);
}

TEST(Cli, MissingSubcommandAndMissingInput) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  const auto o = run_cli({"extract", "--root", "/definitely/not/here", "--out", "x.jsonl"});
  EXPECT_EQ(o.code, cli::kExitUsage);
  EXPECT_NE(error_of(o).at("message").get<std::string>().find("/definitely/not/here"), std::string::npos);
}

TEST(Cli, ConfigPrintsBundledSets) {
  const auto list = run_cli({"config", "--list"});
  ASSERT_EQ(list.code, 0);
  const auto j = json::parse(list.out);
  EXPECT_NE(std::find(j.at("rules").begin(), j.at("rules").end(), "soot-sootup"), j.at("rules").end());
  const auto rules = run_cli({"config", "--rules", "soot-sootup"});
  ASSERT_EQ(rules.code, 0);
  EXPECT_NO_THROW(parse_rules(rules.out));
  const auto weights = run_cli({"config", "--weights", "default"});
  ASSERT_EQ(weights.code, 0);
  EXPECT_DOUBLE_EQ(json::parse(weights.out).at("alpha").get<double>(), 0.5);
  EXPECT_EQ(run_cli({"config", "--rules", "no-such-set"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"config"}).code, cli::kExitUsage);
}

TEST(Cli, InvalidWeightsFileIsUsageError) {
  testing::TempDir dir;
  write_file(dir / "w.json", R"({"alpha":0.9,"beta":0.25,"theta":0.25})");
  EXPECT_EQ(run_cli({"config", "--weights", (dir / "w.json").string()}).code, cli::kExitUsage);
  write_file(dir / "w2.json", R"({"alpha":0.5,"gamma":0.1})");
  EXPECT_EQ(run_cli({"config", "--weights", (dir / "w2.json").string()}).code, cli::kExitUsage);
}

TEST(Cli, ConfigDirSuppliesNamedRulesAndWeights) {
  testing::TempDir dir;
  write_file(dir / "rules/mine.json",
             R"({"name":"mine","rules":[{"scope":"all","target":"original","pattern":"Old","replacement":"New","order":0}]})");
  write_file(dir / "weights/flat.json", R"({"alpha":0.4,"beta":0.3,"theta":0.3})");
  ::setenv("REMAP_CONFIG_DIR", dir.path().c_str(), 1);
  const auto rules = run_cli({"config", "--rules", "mine"});
  const auto weights = run_cli({"config", "--weights", "flat"});
  ::unsetenv("REMAP_CONFIG_DIR");
  ASSERT_EQ(rules.code, 0) << rules.err;
  EXPECT_EQ(parse_rules(rules.out).name(), "mine");
  ASSERT_EQ(weights.code, 0) << weights.err;
  const auto w = json::parse(weights.out);
  EXPECT_DOUBLE_EQ(w.at("alpha").get<double>(), 0.4);
  EXPECT_DOUBLE_EQ(w.at("eta").get<double>(), 0.35);
  EXPECT_EQ(run_cli({"config", "--weights", "flat"}).code, cli::kExitUsage);
}

class CliPipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto toy = testing::fixture_dir() / "toy";
    ASSERT_EQ(run_cli({"extract", "--root", (toy / "original").string(), "--role", "original", "--name", "soot",
                       "--out", path("orig.jsonl")})
                  .code,
              0);
    ASSERT_EQ(run_cli({"extract", "--root", (toy / "redesigned").string(), "--role", "redesigned", "--name",
                       "sootup", "--out", path("redes.jsonl")})
                  .code,
              0);
    ASSERT_EQ(run_cli({"pairs", "--left", path("orig.jsonl"), "--right", path("redes.jsonl"), "--mode",
                       "exhaustive", "--out", path("pairs.jsonl")})
                  .code,
              0);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  Outcome score(const std::string& out, const std::string& format, const std::string& threshold) {
    return run_cli({"score", "--left", path("orig.jsonl"), "--right", path("redes.jsonl"), "--pairs",
                    path("pairs.jsonl"), "--profile", "soot-sootup", "--threshold", threshold, "--format", format,
                    "--out", path(out)});
  }

  testing::TempDir dir_;
};

TEST_F(CliPipeline, SummaryMatchesHandCount) {
  const auto o = score("summary.json", "summary", "0.5");
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = json::parse(read_file(path("summary.json")));
  EXPECT_EQ(j.at("total").at("orig"), 440);
  EXPECT_EQ(j.at("total").at("filt"), 48);
  EXPECT_DOUBLE_EQ(j.at("total").at("out_pct").get<double>(), 89.09);
  EXPECT_TRUE(fs::exists(path("summary.json.manifest.json")));
  const auto m = json::parse(read_file(path("summary.json.manifest.json")));
  EXPECT_EQ(m.at("command"), "score");
  EXPECT_EQ(m.at("counters").at("pairs_kept"), 48);
  EXPECT_TRUE(m.at("config_hashes").contains("rules"));
  EXPECT_TRUE(fs::exists(path("orig.jsonl.manifest.json")));
  EXPECT_TRUE(fs::exists(path("pairs.jsonl.manifest.json")));
}

TEST_F(CliPipeline, EvaluateSweepAblateTune) {
  const std::string labels = (testing::fixture_dir() / "toy" / "labels.csv").string();
  ASSERT_EQ(score("scores.jsonl", "jsonl", "0.6").code, 0);
  auto o = run_cli({"eval", "--scores", path("scores.jsonl"), "--dataset", labels, "--out", path("eval.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto ev = json::parse(read_file(path("eval.json"))).at("evaluation");
  EXPECT_EQ(ev.at("overall").at("counts").at("fp"), 0);
  EXPECT_GE(ev.at("overall").at("counts").at("tp").get<int>(), 14);
  EXPECT_EQ(ev.at("test").at("counts").at("tp").get<int>() + ev.at("test").at("counts").at("fn").get<int>(), 1);

  o = run_cli({"sweep", "--scores", path("scores.jsonl"), "--dataset", labels, "--step", "0.1", "--csv",
               path("sweep.csv"), "--out", path("sweep.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(json::parse(read_file(path("sweep.json"))).at("points").size(), 11u);
  EXPECT_EQ(split_lines(read_file(path("sweep.csv"))).size(), 12u);

  o = run_cli({"ablate", "--left", path("orig.jsonl"), "--right", path("redes.jsonl"), "--pairs", path("pairs.jsonl"),
               "--profile", "soot-sootup", "--dataset", labels, "--out", path("ablate.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto ab = json::parse(read_file(path("ablate.json"))).at("settings");
  ASSERT_EQ(ab.size(), 5u);
  EXPECT_EQ(ab[0].at("ablation"), "ALL");
  EXPECT_TRUE(ab[1].contains("impact"));

  o = run_cli({"score", "--left", path("orig.jsonl"), "--right", path("redes.jsonl"), "--pairs", path("pairs.jsonl"),
               "--profile", "soot-sootup", "--ablation", "exr1", "--out", path("exr1.jsonl")});
  ASSERT_EQ(o.code, 0) << o.err;
  o = run_cli({"impact", "--all", path("scores.jsonl"), "--ex", path("exr1.jsonl"), "--out", path("impact.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto imp = json::parse(read_file(path("impact.json")));
  EXPECT_EQ(imp.at("ablation"), "EXR1");
  EXPECT_GT(imp.at("overall").at("affected").get<int>(), 0);

  o = run_cli({"tune", "--left", path("orig.jsonl"), "--right", path("redes.jsonl"), "--profile", "soot-sootup",
               "--training", labels, "--grid-step", "0.25", "--out", path("tune.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto t = json::parse(read_file(path("tune.json")));
  EXPECT_EQ(t.at("grid_points"), 225);
  EXPECT_EQ(t.at("k"), 15);
  EXPECT_GE(t.at("top_k_tp").get<int>(), 14);
}

TEST_F(CliPipeline, OutputsAreByteIdenticalAcrossRuns) {
  ASSERT_EQ(score("a.jsonl", "jsonl", "0.6").code, 0);
  ASSERT_EQ(score("b.jsonl", "jsonl", "0.6").code, 0);
  EXPECT_EQ(read_file(path("a.jsonl")), read_file(path("b.jsonl")));
  ASSERT_EQ(score("a.csv", "csv", "0.6").code, 0);
  ASSERT_EQ(run_cli({"--threads", "3", "score", "--left", path("orig.jsonl"), "--right", path("redes.jsonl"),
                     "--pairs", path("pairs.jsonl"), "--profile", "soot-sootup", "--threshold", "0.6", "--format",
                     "csv", "--out", path("b.csv")})
                .code,
            0);
  EXPECT_EQ(read_file(path("a.csv")), read_file(path("b.csv")));
}

TEST_F(CliPipeline, StaleSnapshotIsRuntimeError) {
  testing::TempDir other;
  const auto src = testing::fixture_dir() / "toy" / "original";
  fs::copy(src, other.path() / "original", fs::copy_options::recursive);
  fs::remove(other.path() / "original/src/main/java/soot/toolkits/graph/Block.java");
  ASSERT_EQ(run_cli({"extract", "--root", (other.path() / "original").string(), "--out", path("stale.jsonl")}).code,
            0);
  const auto o = run_cli({"score", "--left", path("stale.jsonl"), "--right", path("redes.jsonl"), "--pairs",
                          path("pairs.jsonl"), "--out", path("s.jsonl")});
  EXPECT_EQ(o.code, cli::kExitRuntime);
  const auto e = error_of(o);
  EXPECT_EQ(e.at("kind"), "runtime");
  EXPECT_NE(e.at("message").get<std::string>().find("soot.toolkits.graph.Block#"), std::string::npos);
}

TEST_F(CliPipeline, RoleMismatchIsUsageError) {
  const auto o = run_cli({"score", "--left", path("redes.jsonl"), "--right", path("orig.jsonl"), "--pairs",
                          path("pairs.jsonl"), "--out", path("s.jsonl")});
  EXPECT_EQ(o.code, cli::kExitUsage);
}

}  // namespace
}  // namespace remap
