#ifndef KDDFS_WRAPPER_HPP
#define KDDFS_WRAPPER_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kddfs/entropy.hpp"
#include "kddfs/knn.hpp"

namespace kddfs {

// Where wrapper-phase accuracy is measured. Holdout carves an internal
// validation slice off the training set so the final test set never steers
// selection; ProvidedTest scores candidates on a caller-supplied set.
enum class WrapperEvalMode { Holdout, ProvidedTest };

enum class GainOrder { Descending, Ascending };

struct WrapperConfig {
  KnnConfig knn;
  WrapperEvalMode eval_mode = WrapperEvalMode::Holdout;
  double holdout_fraction = 0.3;
  uint64_t holdout_seed = 1;
  double epsilon = 0.0;    // accept iff accuracy_after > accuracy_before + eps
  int max_features = 0;    // 0: no cap
  int patience = 0;        // 0: try every candidate
  GainOrder order = GainOrder::Descending;
  int threads = 1;
};

struct SelectionStep {
  int candidate = 0;
  std::vector<int> subset_before;  // in acceptance order
  double accuracy_before = 0.0;
  double accuracy_after = 0.0;
  bool accepted = false;
};

struct SelectionTrace {
  int seed_feature = 0;
  double seed_accuracy = 0.0;
  std::vector<SelectionStep> steps;
  FeatureSubset final_subset;
  double final_accuracy = 0.0;
  std::vector<std::string> warnings;
};

// The internal (fit, eval) partition used in Holdout mode; exposed so a
// trace can be replayed against the exact evaluation calls that built it.
std::pair<Dataset, Dataset> holdout_split(const Dataset& train,
                                          const WrapperConfig& cfg);

// Gain-ordered sequential forward selection: seed with the top-ranked
// feature, walk the remaining ranking, keep a candidate only when accuracy
// on the evaluation set strictly improves (by more than epsilon).
SelectionTrace select_features(const Dataset& fit, const Dataset& eval_set,
                               const GainTable& gains,
                               const WrapperConfig& cfg);

// Holdout-mode convenience: splits train per cfg and runs the selection.
SelectionTrace select_features(const Dataset& train, const GainTable& gains,
                               const WrapperConfig& cfg);

struct ComparisonResult {
  EvaluationReport full;
  EvaluationReport selected;
  double difference = 0.0;  // selected.accuracy - full.accuracy
};

// Scores the held-out test set with every feature and with the trace's
// final subset.
ComparisonResult compare_full_vs_selected(const Dataset& train,
                                          const Dataset& test,
                                          const SelectionTrace& trace,
                                          const KnnConfig& cfg,
                                          int threads = 1);

nlohmann::ordered_json trace_to_json(const SelectionTrace& trace);
void write_trace_log(const SelectionTrace& trace, std::ostream& out);

}  // namespace kddfs

#endif
