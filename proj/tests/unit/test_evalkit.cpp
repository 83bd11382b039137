#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>
#include <tuple>

#include "remap/evalkit.hpp"
#include "remap/util.hpp"

namespace remap {
namespace {

LabeledPair labeled(const std::string& l, const std::string& r, bool mapping, CloneType ct = CloneType::NonClone,
                    CodeType code = CodeType::Production) {
  LabeledPair p;
  p.pair = {l, r};
  p.is_code_mapping = mapping;
  p.clone_type = mapping && ct == CloneType::NonClone ? CloneType::T3 : ct;
  p.code_type = code;
  return p;
}

MappingResult scored(const std::string& l, const std::string& r, double sas, CodeType code = CodeType::Production) {
  MappingResult m;
  m.pair = {l, r};
  m.breakdown.sas = sas;
  m.code_type = code;
  return m;
}

// Straight from the definitions, written out independently of metrics_from.
struct Expected {
  double precision, recall, fpr, f1_pos, f1_neg, avg;
};
Expected expected(double tp, double fp, double tn, double fn) {
  auto ratio = [](double a, double b) { return b == 0 ? 0.0 : a / b; };
  Expected e{};
  e.precision = ratio(tp, tp + fp);
  e.recall = ratio(tp, tp + fn);
  e.fpr = ratio(fp, fp + tn);
  e.f1_pos = ratio(2 * e.precision * e.recall, e.precision + e.recall);
  const double np = ratio(tn, tn + fn), nr = ratio(tn, tn + fp);
  e.f1_neg = ratio(2 * np * nr, np + nr);
  e.avg = (e.f1_pos + e.f1_neg) / 2;
  return e;
}

TEST(Metrics, WorkedExample) {
  const auto m = metrics_from({8, 2, 85, 5});
  const auto e = expected(8, 2, 85, 5);
  EXPECT_NEAR(m.precision, 0.8, 1e-12);
  EXPECT_NEAR(m.recall, 8.0 / 13.0, 1e-12);
  EXPECT_NEAR(m.fpr, 2.0 / 87.0, 1e-12);
  EXPECT_NEAR(m.f1_pos, e.f1_pos, 1e-12);
  EXPECT_NEAR(m.f1_neg, e.f1_neg, 1e-12);
  EXPECT_NEAR(m.avg_f1, e.avg, 1e-12);
  EXPECT_NEAR(m.avg_f1, 0.8280, 1e-4);
}

TEST(Metrics, AllCorrect) {
  const auto m = metrics_from({10, 0, 30, 0});
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.fpr, 0.0);
  EXPECT_DOUBLE_EQ(m.avg_f1, 1.0);
}

TEST(Metrics, NoPredictedPositives) {
  const auto m = metrics_from({0, 0, 30, 10});
  EXPECT_DOUBLE_EQ(m.precision, 0.0);
  EXPECT_DOUBLE_EQ(m.recall, 0.0);
  EXPECT_DOUBLE_EQ(m.f1_pos, 0.0);
  EXPECT_LE(m.avg_f1, 0.5);
  const auto empty = metrics_from({});
  EXPECT_DOUBLE_EQ(empty.avg_f1, 0.0);
}

TEST(Metrics, RandomCountsMatchDefinitions) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(0, 20);
  for (int i = 0; i < 500; ++i) {
    const ConfusionCounts c{static_cast<std::size_t>(d(rng)), static_cast<std::size_t>(d(rng)),
                            static_cast<std::size_t>(d(rng)), static_cast<std::size_t>(d(rng))};
    const auto m = metrics_from(c);
    const auto e = expected(c.tp, c.fp, c.tn, c.fn);
    EXPECT_NEAR(m.avg_f1, e.avg, 1e-12);
    EXPECT_NEAR(m.fpr, e.fpr, 1e-12);
  }
}

TEST(Evaluate, IgnoresPredictionsOutsideDataset) {
  const std::vector<LabeledPair> d{labeled("a", "b", true), labeled("c", "d", false), labeled("e", "f", true)};
  const std::set<PairKey> kept{{"a", "b"}, {"c", "d"}, {"x", "y"}};
  const auto ev = evaluate(kept, d, Task::CodeMapping);
  EXPECT_EQ(ev.counts.tp, 1u);
  EXPECT_EQ(ev.counts.fp, 1u);
  EXPECT_EQ(ev.counts.tn, 0u);
  EXPECT_EQ(ev.counts.fn, 1u);
  EXPECT_EQ(ev.counts.total(), d.size());
}

TEST(Evaluate, TaskAndCodeTypeSelectLabels) {
  const std::vector<LabeledPair> d{labeled("a", "b", false, CloneType::T2), labeled("c", "d", true),
                                   labeled("e", "f", false, CloneType::NonClone, CodeType::Test)};
  const std::set<PairKey> kept{{"a", "b"}};
  const auto gc = evaluate(kept, d, Task::GenuineClone);
  EXPECT_EQ(gc.counts.tp, 1u);
  EXPECT_EQ(gc.counts.fn, 1u);
  const auto cm = evaluate(kept, d, Task::CodeMapping);
  EXPECT_EQ(cm.counts.fp, 1u);
  EXPECT_EQ(cm.counts.fn, 1u);
  EXPECT_EQ(cm.counts.tn, 1u);
  const auto test_only = evaluate(kept, d, Task::CodeMapping, CodeType::Test);
  EXPECT_EQ(test_only.counts.total(), 1u);
  EXPECT_EQ(test_only.counts.tn, 1u);
}

TEST(Dataset, ParsesAndRoundTrips) {
  const std::string text =
      "left_key,right_key,clone_type,is_code_mapping,code_type,tools\n"
      "\"p.A#f(int,int)\",q.A#f(),T3,true,production,nicad;ccaligner\n"
      "p.A#g(),q.A#h(),non_clone,false,test,\n";
  const auto d = parse_dataset(text);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].pair.left, "p.A#f(int,int)");
  EXPECT_EQ(d[0].clone_type, CloneType::T3);
  EXPECT_TRUE(d[0].is_code_mapping);
  EXPECT_EQ(d[0].source_tools, (std::set<std::string>{"ccaligner", "nicad"}));
  EXPECT_EQ(d[1].code_type, CodeType::Test);
  EXPECT_TRUE(d[1].source_tools.empty());
  const auto again = parse_dataset(dataset_to_csv(d));
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(again[0].pair, d[0].pair);
  EXPECT_EQ(again[0].source_tools, d[0].source_tools);
  EXPECT_EQ(dataset_to_csv(again), dataset_to_csv(d));
}

TEST(Dataset, RejectsBadRows) {
  const std::string header = "left_key,right_key,clone_type,is_code_mapping,code_type,tools\n";
  EXPECT_THROW(parse_dataset(header + "a,b,non_clone,true,production,\n"), std::runtime_error);
  EXPECT_THROW(parse_dataset(header + "a,b,T9,false,production,\n"), std::runtime_error);
  EXPECT_THROW(parse_dataset(header + "a,b,T1,maybe,production,\n"), std::runtime_error);
  EXPECT_THROW(parse_dataset(header + "a,b,T1,true,library,\n"), std::runtime_error);
  EXPECT_THROW(parse_dataset(header + "a,b,T1,true,production,\na,b,T2,true,production,\n"),
               std::runtime_error);
  EXPECT_THROW(parse_dataset("left_key,clone_type\na,T1\n"), std::runtime_error);
  try {
    parse_dataset(header + "a,b,T1,true,production,\nc,d,T7,true,production,\n");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
}

TEST(Sweep, BoundariesAndArgmax) {
  const std::vector<LabeledPair> d{labeled("p1", "x", true), labeled("p2", "x", true), labeled("n1", "x", false),
                                   labeled("n2", "x", false)};
  const std::vector<MappingResult> s{scored("p1", "x", 0.8), scored("p2", "x", 0.7), scored("n1", "x", 0.4),
                                     scored("n2", "x", 0.2)};
  const auto r = sweep(s, d, Task::CodeMapping, threshold_ladder(0.0, 1.0, 0.1));
  ASSERT_EQ(r.points.size(), 11u);
  EXPECT_DOUBLE_EQ(r.points[0].metrics.recall, 1.0);
  EXPECT_EQ(r.points[0].counts.fp, 2u);
  EXPECT_EQ(r.points[10].counts.tp, 0u);
  EXPECT_DOUBLE_EQ(r.points[10].metrics.precision, 0.0);
  ASSERT_TRUE(r.best);
  EXPECT_NEAR(r.points[*r.best].threshold, 0.5, 1e-9);
  EXPECT_DOUBLE_EQ(r.points[*r.best].metrics.avg_f1, 1.0);
  // 0.7 is reached exactly and still keeps p2.
  EXPECT_EQ(r.points[7].counts.tp, 2u);
}

TEST(Sweep, EmptyAndInvalidInputs) {
  const auto r = sweep({}, {}, Task::CodeMapping, {});
  EXPECT_TRUE(r.points.empty());
  EXPECT_FALSE(r.best);
  EXPECT_THROW(sweep({}, {}, Task::CodeMapping, {0.5, 0.5}), UsageError);
  EXPECT_THROW(threshold_ladder(0.0, 1.0, 0.0), UsageError);
  const auto ladder = threshold_ladder(0.3, 0.9, 0.05);
  ASSERT_EQ(ladder.size(), 13u);
  EXPECT_DOUBLE_EQ(ladder.back(), 0.9);
  const auto csv_text = sweep_to_csv(sweep({}, {}, Task::CodeMapping, {0.5}));
  EXPECT_EQ(csv_text.rfind("threshold,fpr,precision,recall,f1_pos,f1_neg,avg_f1\n", 0), 0u);
}

TEST(Impact, NoChangeWhenScoresMatch) {
  const std::vector<MappingResult> a{scored("a", "b", 0.5), scored("c", "d", 0.7)};
  const auto r = rule_impact(a, a);
  EXPECT_EQ(r.overall.pairs, 2u);
  EXPECT_EQ(r.overall.affected, 0u);
  EXPECT_DOUBLE_EQ(r.overall.max_sas_change, 0.0);
  EXPECT_EQ(r.overall.max_rank_change, 0);
}

TEST(Impact, FlipChangesRanks) {
  const std::vector<MappingResult> all{scored("a", "x", 0.9), scored("b", "x", 0.8), scored("c", "x", 0.1, CodeType::Test)};
  const std::vector<MappingResult> ex{scored("a", "x", 0.7), scored("b", "x", 0.8), scored("c", "x", 0.1, CodeType::Test)};
  const auto r = rule_impact(all, ex);
  EXPECT_EQ(r.overall.affected, 1u);
  EXPECT_NEAR(r.overall.max_sas_change, 0.2, 1e-12);
  EXPECT_EQ(std::abs(r.overall.max_rank_change), 1);
  EXPECT_EQ(r.production.pairs, 2u);
  EXPECT_EQ(r.test.pairs, 1u);
  EXPECT_EQ(r.test.affected, 0u);
}

TEST(Impact, MismatchedPairSetsThrow) {
  const std::vector<MappingResult> a{scored("a", "b", 0.5)};
  const std::vector<MappingResult> b{scored("a", "c", 0.5)};
  EXPECT_THROW(rule_impact(a, b), std::runtime_error);
  EXPECT_THROW(rule_impact(a, {}), std::runtime_error);
}

// ---- tuner ----

std::vector<TrainingExample> random_training(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution absent(0.2);
  auto sim = [&]() -> Similarity {
    if (absent(rng)) return std::nullopt;
    return std::round(u(rng) * 20) / 20;
  };
  std::vector<TrainingExample> out;
  for (int i = 0; i < n; ++i) {
    TrainingExample e;
    e.pair = {"l" + std::to_string(i), "r"};
    e.positive = i % 3 == 0;
    e.fields = {sim(), sim(), sim(), sim(), sim(), sim(), sim(), sim()};
    e.fields.class_name = std::round(u(rng) * 20) / 20;
    out.push_back(e);
  }
  return out;
}

std::size_t top_k_oracle(const std::vector<TrainingExample>& ex, const WeightConfig& w, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < ex.size(); ++i) order.push_back({score(ex[i].fields, w, Ablation::All).sas, i});
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return ex[a.second].pair < ex[b.second].pair;
  });
  std::size_t tp = 0;
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) tp += ex[order[i].second].positive;
  return tp;
}

TEST(Tuner, TopKMatchesSortOracle) {
  std::mt19937 rng(21);
  const auto ex = random_training(rng, 40);
  for (std::size_t k : {1u, 5u, 14u, 40u, 60u}) EXPECT_EQ(top_k_true_positives(ex, WeightConfig{}, k), top_k_oracle(ex, WeightConfig{}, k));
}

TEST(Tuner, MatchesExhaustiveEnumeration) {
  std::mt19937 rng(3);
  for (int round = 0; round < 3; ++round) {
    const auto ex = random_training(rng, 30);
    TunerConfig cfg;
    cfg.grid_step = 0.25;
    const auto got = tune(ex, cfg);
    const std::size_t k = 10;  // positives among 30
    ASSERT_EQ(got.k, k);

    std::vector<std::array<int, 3>> simplex;
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; i + j <= 4; ++j) simplex.push_back({i, j, 4 - i - j});
    std::size_t best = 0, count = 0;
    std::tuple<std::size_t, int, std::array<int, 6>> best_key{0, -1, {}};
    for (const auto& c : simplex) {
      for (const auto& h : simplex) {
        const WeightConfig w{c[0] / 4.0, c[1] / 4.0, c[2] / 4.0, h[0] / 4.0, h[1] / 4.0, h[2] / 4.0};
        const std::size_t tp = top_k_oracle(ex, w, k);
        const std::array<int, 6> q{c[0], c[1], c[2], h[0], h[1], h[2]};
        const int mn = *std::min_element(q.begin(), q.end());
        if (tp > best) {
          best = tp;
          count = 0;
        }
        if (tp == best) ++count;
        best_key = std::max(best_key, std::make_tuple(tp, mn, q));
      }
    }
    EXPECT_EQ(got.grid_points, simplex.size() * simplex.size());
    EXPECT_EQ(got.top_k_tp, best);
    EXPECT_EQ(got.optimal_points, count);
    const auto& q = std::get<2>(best_key);
    const WeightConfig expect_w{q[0] / 4.0, q[1] / 4.0, q[2] / 4.0, q[3] / 4.0, q[4] / 4.0, q[5] / 4.0};
    EXPECT_EQ(got.weights, expect_w);
    EXPECT_EQ(top_k_oracle(ex, got.weights, k), got.top_k_tp);
  }
}

TEST(Tuner, ConstantObjectivePrefersBalancedWeights) {
  std::vector<TrainingExample> ex(4);
  for (int i = 0; i < 4; ++i) {
    ex[i].pair = {"l" + std::to_string(i), "r"};
    ex[i].positive = true;
    ex[i].fields.class_name = 0.5;
  }
  TunerConfig cfg;
  cfg.grid_step = 0.25;
  const auto r = tune(ex, cfg);
  EXPECT_EQ(r.top_k_tp, 4u);
  EXPECT_EQ(r.optimal_points, r.grid_points);
  EXPECT_EQ(r.weights, (WeightConfig{0.5, 0.25, 0.25, 0.5, 0.25, 0.25}));
}

TEST(Tuner, RejectsBadInput) {
  std::vector<TrainingExample> ex(2);
  ex[0].pair = {"a", "b"};
  ex[1].pair = {"c", "d"};
  EXPECT_THROW(tune(ex, {}), std::runtime_error);
  ex[0].positive = true;
  TunerConfig cfg;
  cfg.grid_step = 0.3;
  EXPECT_THROW(tune(ex, cfg), UsageError);
  EXPECT_THROW(tune({}, {}), std::runtime_error);
}

}  // namespace
}  // namespace remap
