#include "kddfs/wrapper.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <stdexcept>

#include "kddfs/csv.hpp"

namespace kddfs {

namespace {

void check_config(const WrapperConfig& cfg) {
  if (!(cfg.holdout_fraction > 0.0 && cfg.holdout_fraction < 1.0))
    throw std::invalid_argument("WrapperConfig: holdout_fraction in (0,1)");
  if (cfg.epsilon < 0.0)
    throw std::invalid_argument("WrapperConfig: epsilon must be >= 0");
}

std::vector<int> traversal_order(const GainTable& gains,
                                 const WrapperConfig& cfg) {
  std::vector<int> order = gains.ranking;
  if (cfg.order == GainOrder::Ascending)
    std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace

std::pair<Dataset, Dataset> holdout_split(const Dataset& train,
                                          const WrapperConfig& cfg) {
  check_config(cfg);
  SplitSpec spec;
  spec.mode = SplitMode::RandomSplit;
  spec.train_fraction = 1.0 - cfg.holdout_fraction;
  spec.seed = cfg.holdout_seed;
  return split(train, spec);
}

SelectionTrace select_features(const Dataset& fit, const Dataset& eval_set,
                               const GainTable& gains,
                               const WrapperConfig& cfg) {
  check_config(cfg);
  if (gains.ranking.empty())
    throw std::invalid_argument("select_features: empty gain table");
  if (gains.ranking.size() != fit.cols())
    throw std::invalid_argument(
        "select_features: gain table covers " +
        std::to_string(gains.ranking.size()) + " features, dataset has " +
        std::to_string(fit.cols()));

  SelectionTrace trace;

  // a category missing from either side makes its accuracies unreachable
  std::array<bool, kCategoryCount> in_fit{}, in_eval{};
  for (AttackCategory c : fit.labels()) in_fit[static_cast<size_t>(c)] = true;
  for (AttackCategory c : eval_set.labels())
    in_eval[static_cast<size_t>(c)] = true;
  for (int c = 0; c < kCategoryCount; ++c) {
    const auto cat = static_cast<AttackCategory>(c);
    if (in_fit[static_cast<size_t>(c)] && !in_eval[static_cast<size_t>(c)])
      trace.warnings.push_back(std::string("category '") +
                               category_name(cat) +
                               "' absent from the evaluation split");
    if (!in_fit[static_cast<size_t>(c)] && in_eval[static_cast<size_t>(c)])
      trace.warnings.push_back(std::string("category '") +
                               category_name(cat) +
                               "' absent from the fit split");
  }

  const std::vector<int> order = traversal_order(gains, cfg);

  FeatureSubset subset;
  subset.add(order[0]);
  trace.seed_feature = order[0];
  double best =
      evaluate(fit, eval_set, subset, cfg.knn, cfg.threads).accuracy;
  trace.seed_accuracy = best;

  int rejections_in_a_row = 0;
  for (size_t i = 1; i < order.size(); ++i) {
    if (cfg.max_features > 0 &&
        subset.size() >= static_cast<size_t>(cfg.max_features))
      break;
    const int candidate = order[i];
    FeatureSubset trial = subset;
    trial.add(candidate);
    const double after =
        evaluate(fit, eval_set, trial, cfg.knn, cfg.threads).accuracy;
    SelectionStep step;
    step.candidate = candidate;
    step.subset_before = subset.indices();
    step.accuracy_before = best;
    step.accuracy_after = after;
    step.accepted = after > best + cfg.epsilon;
    trace.steps.push_back(step);
    if (step.accepted) {
      subset = std::move(trial);
      best = after;
      rejections_in_a_row = 0;
    } else {
      ++rejections_in_a_row;
      if (cfg.patience > 0 && rejections_in_a_row >= cfg.patience) break;
    }
  }

  trace.final_subset = subset;
  trace.final_accuracy = best;
  return trace;
}

SelectionTrace select_features(const Dataset& train, const GainTable& gains,
                               const WrapperConfig& cfg) {
  if (cfg.eval_mode == WrapperEvalMode::ProvidedTest)
    throw std::invalid_argument(
        "select_features: ProvidedTest mode needs an explicit evaluation set");
  auto [fit, eval_set] = holdout_split(train, cfg);
  return select_features(fit, eval_set, gains, cfg);
}

ComparisonResult compare_full_vs_selected(const Dataset& train,
                                          const Dataset& test,
                                          const SelectionTrace& trace,
                                          const KnnConfig& cfg, int threads) {
  ComparisonResult result;
  result.full = evaluate(train, test, FeatureSubset::all(train.schema()), cfg,
                         threads);
  result.selected = evaluate(train, test, trace.final_subset, cfg, threads);
  result.difference = result.selected.accuracy - result.full.accuracy;
  return result;
}

nlohmann::ordered_json trace_to_json(const SelectionTrace& trace) {
  nlohmann::ordered_json j;
  j["seed_feature"] = trace.seed_feature;
  j["seed_accuracy"] = trace.seed_accuracy;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const SelectionStep& s : trace.steps) {
    nlohmann::ordered_json step;
    step["candidate"] = s.candidate;
    step["subset_before"] = s.subset_before;
    step["accuracy_before"] = s.accuracy_before;
    step["accuracy_after"] = s.accuracy_after;
    step["accepted"] = s.accepted;
    steps.push_back(std::move(step));
  }
  j["steps"] = std::move(steps);
  j["final_subset"] = trace.final_subset.sorted();
  j["final_subset_order"] = trace.final_subset.indices();
  j["final_accuracy"] = trace.final_accuracy;
  j["warnings"] = trace.warnings;
  return j;
}

void write_trace_log(const SelectionTrace& trace, std::ostream& out) {
  for (const std::string& w : trace.warnings) out << "warning: " << w << '\n';
  out << "seed feature " << trace.seed_feature << " accuracy "
      << csv::format_double(trace.seed_accuracy) << '\n';
  for (const SelectionStep& s : trace.steps) {
    out << (s.accepted ? "accept" : "reject") << " feature " << s.candidate
        << ": " << csv::format_double(s.accuracy_before) << " -> "
        << csv::format_double(s.accuracy_after) << '\n';
  }
  out << "selected " << trace.final_subset.to_string() << " accuracy "
      << csv::format_double(trace.final_accuracy) << '\n';
}

}  // namespace kddfs
