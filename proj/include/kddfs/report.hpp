#ifndef KDDFS_REPORT_HPP
#define KDDFS_REPORT_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "kddfs/wrapper.hpp"

namespace kddfs {

// One (sample size, seed) grid of the size-sweep experiment.
struct ExperimentPlan {
  std::vector<size_t> sizes = {1000, 10000, 50000, 100000, 150000, 250000};
  std::vector<uint64_t> seeds = {1};
  DiscretizationSpec discretization;
  KnnConfig knn;
  WrapperConfig wrapper;
};

nlohmann::ordered_json plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::ordered_json& j);

struct ExperimentCell {
  size_t size = 0;
  uint64_t seed = 0;
  bool ok = false;
  std::vector<int> subset;  // ascending
  double accuracy_full = 0.0;
  double accuracy_selected = 0.0;
  double elapsed_seconds = 0.0;
  std::string error;  // empty when ok
};

struct ExperimentDocument {
  int schema_version = 1;
  ExperimentPlan plan;
  std::vector<ExperimentCell> cells;
};

// sample -> rank -> select -> compare, once per (size, seed). A failing
// cell records its error and the run continues.
ExperimentDocument run_experiment(const ExperimentPlan& plan,
                                  const Dataset& train, const Dataset& test,
                                  int threads = 1);

nlohmann::ordered_json document_to_json(const ExperimentDocument& doc,
                                        bool include_timings = false);
ExperimentDocument document_from_json(const nlohmann::ordered_json& j);

// One CSV row per feature in index order, then a ranking-ordered view.
void emit_gain_report(const GainTable& gains, std::ostream& out);
GainTable parse_gain_report(std::istream& in);

nlohmann::ordered_json gains_to_json(const GainTable& gains);

// "size,seed,subset,acc_full,acc_selected", sorted by size then seed,
// accuracies as Table-style percentages (two decimals).
void emit_comparison(const ExperimentDocument& doc, std::ostream& out);

// Plot-ready lines "size acc_full acc_selected" (raw fractions), sorted.
void emit_plot_data(const ExperimentDocument& doc, std::ostream& out);

// Deterministic synthetic generator standing in for the real corpus in CI.
// Informative features get class-conditional means (rotated per feature so
// the features complement each other); noise features are label-independent.
struct SyntheticSpec {
  size_t rows = 0;
  int informative_features = 0;
  int noise_features = 0;
  std::array<double, kCategoryCount> class_proportions = {0.40, 0.25, 0.15,
                                                          0.12, 0.08};
  double separation = 1.0;
  uint64_t seed = 1;
  bool kdd_names = false;  // use the 41-feature schema (needs 41 features)
};

Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace kddfs

#endif
