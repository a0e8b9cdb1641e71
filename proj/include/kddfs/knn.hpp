#ifndef KDDFS_KNN_HPP
#define KDDFS_KNN_HPP

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "kddfs/dataset.hpp"

namespace kddfs {

enum class DistanceMetric { Euclidean, Manhattan };
enum class VoteWeighting { Uniform, InverseDistance };

struct KnnConfig {
  int k = 10;
  DistanceMetric metric = DistanceMetric::Euclidean;
  VoteWeighting weighting = VoteWeighting::Uniform;
};

// Ordered set of 1-based feature indices.
class FeatureSubset {
 public:
  FeatureSubset() = default;
  explicit FeatureSubset(std::vector<int> indices);

  static FeatureSubset all(const FeatureSchema& schema);
  static FeatureSubset parse(const std::string& comma_list);

  void add(int index);
  bool contains(int index) const;
  size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const std::vector<int>& indices() const { return indices_; }  // as added
  std::vector<int> sorted() const;
  std::string to_string() const;  // ascending, e.g. "5,12,21,22"
  void validate_against(const FeatureSchema& schema) const;

 private:
  std::vector<int> indices_;
};

struct EvaluationReport {
  double accuracy = 0.0;
  size_t positives = 0;
  size_t total = 0;
  // confusion[actual][predicted], categories in canonical order
  std::array<std::array<size_t, kCategoryCount>, kCategoryCount> confusion{};
  double elapsed_seconds = 0.0;
};

// Metric over the subset's coordinates only. Euclidean returns the true root.
double distance(std::span<const double> a, std::span<const double> b,
                const FeatureSubset& subset, DistanceMetric metric);

// Majority vote of the k nearest training rows. Distance ties break by
// ascending row id; vote ties go to the tied category holding the nearest
// neighbor, then to canonical category order.
AttackCategory predict(const Dataset& train, std::span<const double> query,
                       const FeatureSubset& subset, const KnnConfig& cfg);

// Per-record prediction over the whole test set. Parallel execution over
// test rows produces output identical to the single-threaded run.
EvaluationReport evaluate(const Dataset& train, const Dataset& test,
                          const FeatureSubset& subset, const KnnConfig& cfg,
                          int threads = 1);

// "accuracy,positives,total" with full-precision accuracy.
void report_to_csv(const EvaluationReport& report, std::ostream& out);
nlohmann::ordered_json report_to_json(const EvaluationReport& report,
                                      bool include_timing = false);

}  // namespace kddfs

#endif
