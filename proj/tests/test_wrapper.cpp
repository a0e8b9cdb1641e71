#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "kddfs/report.hpp"
#include "kddfs/rng.hpp"
#include "kddfs/wrapper.hpp"

using namespace kddfs;

namespace {

// Independent replay of the greedy loop: walk the same order, call the same
// evaluator, keep strict improvements.
std::vector<int> reference_selection(const Dataset& fit, const Dataset& eval,
                                     const GainTable& gains,
                                     const WrapperConfig& cfg) {
  std::vector<int> order = gains.ranking;
  if (cfg.order == GainOrder::Ascending)
    std::reverse(order.begin(), order.end());
  std::vector<int> subset = {order[0]};
  double best =
      evaluate(fit, eval, FeatureSubset(subset), cfg.knn).accuracy;
  for (size_t i = 1; i < order.size(); ++i) {
    std::vector<int> trial = subset;
    trial.push_back(order[i]);
    const double acc =
        evaluate(fit, eval, FeatureSubset(trial), cfg.knn).accuracy;
    if (acc > best + cfg.epsilon) {
      subset = trial;
      best = acc;
    }
  }
  return subset;
}

}  // namespace

TEST_SUITE_BEGIN("wrapper");

TEST_CASE("a perfect seed feature rejects pure-noise candidates") {
  Rng rng(31);
  std::vector<std::vector<double>> rows;
  std::vector<AttackCategory> labels;
  for (int i = 0; i < 80; ++i) {
    const auto cat = static_cast<AttackCategory>(rng.below(3));
    rows.push_back(
        {10.0 * double(int(cat)), rng.unit(), rng.unit(), rng.unit()});
    labels.push_back(cat);
  }
  const Dataset ds = helpers::make_dataset(rows, labels);
  const GainTable gains = build_gain_table(ds, {});
  REQUIRE(gains.ranking.front() == 1);

  WrapperConfig cfg;
  cfg.knn.k = 1;
  // evaluating on the training rows themselves: the seed feature alone is
  // already perfect, so nothing can strictly improve
  const SelectionTrace trace = select_features(ds, ds, gains, cfg);
  CHECK(trace.seed_feature == 1);
  CHECK(trace.seed_accuracy == 1.0);
  CHECK(trace.final_subset.indices() == std::vector<int>{1});
  CHECK(trace.final_accuracy == 1.0);
  for (const SelectionStep& s : trace.steps) CHECK_FALSE(s.accepted);
}

TEST_CASE("complementary features: the second one is accepted") {
  // 4-point parity table; either feature alone scores 50%, both score 100%
  const Dataset ds = helpers::make_dataset(
      {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}},
      {AttackCategory::Dos, AttackCategory::Normal, AttackCategory::Normal,
       AttackCategory::Dos});
  const GainTable gains = build_gain_table(ds, {});
  // parity features carry zero marginal gain; ties break by index
  CHECK(gains.ranking == std::vector<int>{1, 2});

  WrapperConfig cfg;
  cfg.knn.k = 1;
  const SelectionTrace trace = select_features(ds, ds, gains, cfg);
  CHECK(trace.seed_accuracy == 0.5);
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps[0].accepted);
  CHECK(trace.steps[0].accuracy_after == 1.0);
  CHECK(trace.final_subset.to_string() == "1,2");
  CHECK(trace.final_accuracy == 1.0);
}

TEST_CASE("selection equals an independent replay of the loop") {
  for (uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    SyntheticSpec spec;
    spec.rows = 240;
    spec.informative_features = 3;
    spec.noise_features = 5;
    spec.seed = seed;
    const Dataset ds = generate_synthetic(spec);
    const GainTable gains = build_gain_table(ds, {});

    WrapperConfig cfg;
    cfg.knn.k = 5;
    cfg.holdout_seed = seed;
    auto [fit, eval_set] = holdout_split(ds, cfg);
    const SelectionTrace trace = select_features(fit, eval_set, gains, cfg);
    CHECK(trace.final_subset.indices() ==
          reference_selection(fit, eval_set, gains, cfg));
  }
}

TEST_CASE("trace invariants and exact replay") {
  SyntheticSpec spec;
  spec.rows = 200;
  spec.informative_features = 2;
  spec.noise_features = 4;
  spec.seed = 9;
  const Dataset ds = generate_synthetic(spec);
  const GainTable gains = build_gain_table(ds, {});

  WrapperConfig cfg;
  cfg.knn.k = 3;
  auto [fit, eval_set] = holdout_split(ds, cfg);
  const SelectionTrace trace = select_features(fit, eval_set, gains, cfg);

  // every feature examined at most once, in ranking order
  std::set<int> seen = {trace.seed_feature};
  for (const SelectionStep& s : trace.steps) {
    CHECK(seen.count(s.candidate) == 0);
    seen.insert(s.candidate);
  }
  CHECK(trace.steps.size() == gains.ranking.size() - 1);

  // accepted accuracies strictly increase; subset grows by accepted steps
  double last = trace.seed_accuracy;
  size_t accepted = 0;
  for (const SelectionStep& s : trace.steps) {
    CHECK(s.accuracy_before == last);
    if (s.accepted) {
      CHECK(s.accuracy_after > s.accuracy_before);
      last = s.accuracy_after;
      ++accepted;
    }
  }
  CHECK(trace.final_subset.size() == 1 + accepted);
  CHECK(trace.final_accuracy == last);

  // replaying each recorded evaluation reproduces its accuracy bit-exactly
  CHECK(evaluate(fit, eval_set, FeatureSubset({trace.seed_feature}), cfg.knn)
            .accuracy == trace.seed_accuracy);
  for (const SelectionStep& s : trace.steps) {
    FeatureSubset subset(s.subset_before);
    subset.add(s.candidate);
    CHECK(evaluate(fit, eval_set, subset, cfg.knn).accuracy ==
          s.accuracy_after);
  }

  // determinism: the same inputs give an identical trace
  const SelectionTrace again = select_features(fit, eval_set, gains, cfg);
  CHECK(trace_to_json(again) == trace_to_json(trace));
}

TEST_CASE("ascending order seeds from the bottom of the ranking") {
  SyntheticSpec spec;
  spec.rows = 120;
  spec.informative_features = 2;
  spec.noise_features = 2;
  spec.seed = 5;
  const Dataset ds = generate_synthetic(spec);
  const GainTable gains = build_gain_table(ds, {});
  WrapperConfig cfg;
  cfg.knn.k = 3;
  cfg.order = GainOrder::Ascending;
  const SelectionTrace trace = select_features(ds, ds, gains, cfg);
  CHECK(trace.seed_feature == gains.ranking.back());
}

TEST_CASE("epsilon, max_features and patience caps") {
  SyntheticSpec spec;
  spec.rows = 150;
  spec.informative_features = 3;
  spec.noise_features = 3;
  spec.seed = 77;
  const Dataset ds = generate_synthetic(spec);
  const GainTable gains = build_gain_table(ds, {});

  WrapperConfig cfg;
  cfg.knn.k = 3;
  SUBCASE("an impossible epsilon rejects everything") {
    cfg.epsilon = 1.0;
    const SelectionTrace trace = select_features(ds, ds, gains, cfg);
    CHECK(trace.final_subset.size() == 1);
    for (const SelectionStep& s : trace.steps) CHECK_FALSE(s.accepted);
  }
  SUBCASE("max_features stops the walk") {
    cfg.max_features = 1;
    const SelectionTrace trace = select_features(ds, ds, gains, cfg);
    CHECK(trace.final_subset.size() == 1);
    CHECK(trace.steps.empty());
  }
  SUBCASE("patience stops after consecutive rejections") {
    cfg.epsilon = 1.0;  // force rejections
    cfg.patience = 2;
    const SelectionTrace trace = select_features(ds, ds, gains, cfg);
    CHECK(trace.steps.size() == 2);
  }
}

TEST_CASE("a category missing from the holdout is only a warning") {
  Rng rng(55);
  std::vector<std::vector<double>> rows;
  std::vector<AttackCategory> labels;
  for (int i = 0; i < 60; ++i) {
    const auto cat = static_cast<AttackCategory>(rng.below(2));
    rows.push_back({double(int(cat)), rng.unit()});
    labels.push_back(cat);
  }
  // one single U2R row: whichever side it lands on, the other misses it
  rows.push_back({4.0, 0.5});
  labels.push_back(AttackCategory::U2R);
  const Dataset ds = helpers::make_dataset(rows, labels);
  const GainTable gains = build_gain_table(ds, {});

  WrapperConfig cfg;
  cfg.knn.k = 1;
  const SelectionTrace trace = select_features(ds, gains, cfg);
  REQUIRE_FALSE(trace.warnings.empty());
  CHECK(trace.warnings.front().find("u2r") != std::string::npos);
  CHECK(trace.final_subset.size() >= 1);
}

TEST_CASE("select_features rejects bad inputs") {
  const Dataset ds = helpers::make_dataset(
      {{0.0, 1.0}, {1.0, 0.0}}, {AttackCategory::Dos, AttackCategory::Normal});
  WrapperConfig cfg;
  CHECK_THROWS(select_features(ds, ds, GainTable{}, cfg));
  cfg.eval_mode = WrapperEvalMode::ProvidedTest;
  const GainTable gains = build_gain_table(
      helpers::make_dataset({{0.0, 1.0}, {1.0, 0.0}, {0.0, 0.0}},
                            {AttackCategory::Dos, AttackCategory::Normal,
                             AttackCategory::Dos}),
      {});
  CHECK_THROWS(select_features(ds, gains, cfg));
}

TEST_CASE("compare_full_vs_selected: identical subsets tie exactly") {
  SyntheticSpec spec;
  spec.rows = 120;
  spec.informative_features = 2;
  spec.noise_features = 0;
  spec.seed = 3;
  const Dataset ds = generate_synthetic(spec);
  auto [train, test] = split(ds, SplitSpec{});

  SelectionTrace trace;
  trace.final_subset = FeatureSubset::all(train.schema());
  KnnConfig cfg;
  cfg.k = 3;
  const ComparisonResult cmp =
      compare_full_vs_selected(train, test, trace, cfg);
  CHECK(cmp.difference == 0.0);
  CHECK(cmp.full.accuracy == cmp.selected.accuracy);
}

TEST_CASE("trace serialization carries the step log") {
  const Dataset ds = helpers::make_dataset(
      {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}},
      {AttackCategory::Dos, AttackCategory::Normal, AttackCategory::Normal,
       AttackCategory::Dos});
  const GainTable gains = build_gain_table(ds, {});
  WrapperConfig cfg;
  cfg.knn.k = 1;
  const SelectionTrace trace = select_features(ds, ds, gains, cfg);

  const auto j = trace_to_json(trace);
  CHECK(j.at("seed_feature").get<int>() == 1);
  CHECK(j.at("final_subset").get<std::vector<int>>() ==
        std::vector<int>{1, 2});
  CHECK(j.at("steps").size() == 1);
  CHECK(j.at("steps")[0].at("accepted").get<bool>());

  std::ostringstream log;
  write_trace_log(trace, log);
  CHECK(log.str().find("accept feature 2") != std::string::npos);
  CHECK(log.str().find("selected 1,2") != std::string::npos);
}

TEST_SUITE_END();
