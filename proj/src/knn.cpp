#include "kddfs/knn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kddfs/csv.hpp"
#include "kddfs/parallel.hpp"

namespace kddfs {

FeatureSubset::FeatureSubset(std::vector<int> indices)
    : indices_(std::move(indices)) {
  for (size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 1)
      throw std::invalid_argument("FeatureSubset: indices are 1-based");
    for (size_t j = 0; j < i; ++j)
      if (indices_[j] == indices_[i])
        throw std::invalid_argument("FeatureSubset: duplicate feature " +
                                    std::to_string(indices_[i]));
  }
}

FeatureSubset FeatureSubset::all(const FeatureSchema& schema) {
  std::vector<int> indices(schema.feature_count());
  for (size_t i = 0; i < indices.size(); ++i)
    indices[i] = static_cast<int>(i) + 1;
  return FeatureSubset(std::move(indices));
}

FeatureSubset FeatureSubset::parse(const std::string& comma_list) {
  std::vector<int> indices;
  std::stringstream ss(comma_list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size())
      throw std::invalid_argument("FeatureSubset: bad index '" + tok + "'");
    indices.push_back(v);
  }
  return FeatureSubset(std::move(indices));
}

void FeatureSubset::add(int index) {
  if (index < 1)
    throw std::invalid_argument("FeatureSubset: indices are 1-based");
  if (contains(index))
    throw std::invalid_argument("FeatureSubset: duplicate feature " +
                                std::to_string(index));
  indices_.push_back(index);
}

bool FeatureSubset::contains(int index) const {
  return std::find(indices_.begin(), indices_.end(), index) != indices_.end();
}

std::vector<int> FeatureSubset::sorted() const {
  std::vector<int> s = indices_;
  std::sort(s.begin(), s.end());
  return s;
}

std::string FeatureSubset::to_string() const {
  std::string out;
  for (int idx : sorted()) {
    if (!out.empty()) out.push_back(',');
    out += std::to_string(idx);
  }
  return out;
}

void FeatureSubset::validate_against(const FeatureSchema& schema) const {
  for (int idx : indices_)
    if (idx < 1 || idx > static_cast<int>(schema.feature_count()))
      throw std::invalid_argument("FeatureSubset: feature " +
                                  std::to_string(idx) +
                                  " not in schema of width " +
                                  std::to_string(schema.feature_count()));
}

namespace {

// Ranking key: squared euclidean or manhattan sum. Monotone in the true
// distance, so neighbor order is unchanged.
double distance_key(std::span<const double> a, std::span<const double> b,
                    const std::vector<int>& subset, DistanceMetric metric) {
  double acc = 0.0;
  if (metric == DistanceMetric::Euclidean) {
    for (int idx : subset) {
      const double d = a[static_cast<size_t>(idx) - 1] -
                       b[static_cast<size_t>(idx) - 1];
      acc += d * d;
    }
  } else {
    for (int idx : subset) {
      acc += std::abs(a[static_cast<size_t>(idx) - 1] -
                      b[static_cast<size_t>(idx) - 1]);
    }
  }
  return acc;
}

double key_to_distance(double key, DistanceMetric metric) {
  return metric == DistanceMetric::Euclidean ? std::sqrt(key) : key;
}

struct Neighbor {
  double key;
  uint64_t row_id;
  AttackCategory category;
};

// Scratch buffers reused across queries of one evaluate() worker.
struct PredictScratch {
  std::vector<Neighbor> all;
};

AttackCategory vote(std::span<const Neighbor> neighbors, DistanceMetric metric,
                    VoteWeighting weighting) {
  std::array<double, kCategoryCount> votes{};
  bool exact_match = !neighbors.empty() && neighbors.front().key == 0.0;
  if (weighting == VoteWeighting::Uniform) {
    for (const Neighbor& nb : neighbors)
      votes[static_cast<size_t>(nb.category)] += 1.0;
  } else if (exact_match) {
    // zero-distance neighbors carry infinite weight; they decide alone
    for (const Neighbor& nb : neighbors)
      if (nb.key == 0.0) votes[static_cast<size_t>(nb.category)] += 1.0;
  } else {
    for (const Neighbor& nb : neighbors)
      votes[static_cast<size_t>(nb.category)] +=
          1.0 / key_to_distance(nb.key, metric);
  }

  double best = -1.0;
  for (double v : votes) best = std::max(best, v);
  std::array<bool, kCategoryCount> tied{};
  int tied_count = 0;
  for (int c = 0; c < kCategoryCount; ++c) {
    tied[static_cast<size_t>(c)] = votes[static_cast<size_t>(c)] == best;
    tied_count += tied[static_cast<size_t>(c)] ? 1 : 0;
  }
  if (tied_count > 1) {
    // nearest neighbor within the tied categories decides
    for (const Neighbor& nb : neighbors)
      if (tied[static_cast<size_t>(nb.category)]) return nb.category;
  }
  for (int c = 0; c < kCategoryCount; ++c)
    if (tied[static_cast<size_t>(c)]) return static_cast<AttackCategory>(c);
  throw std::logic_error("vote: no category");
}

AttackCategory predict_impl(const Dataset& train,
                            std::span<const double> query,
                            const FeatureSubset& subset, const KnnConfig& cfg,
                            PredictScratch& scratch) {
  const size_t n = train.rows();
  auto& all = scratch.all;
  all.clear();
  all.reserve(n);
  const std::vector<int>& idx = subset.indices();
  for (size_t r = 0; r < n; ++r)
    all.push_back({distance_key(query, train.row(r), idx, cfg.metric),
                   train.row_id(r), train.label(r)});

  const size_t kk = std::min<size_t>(static_cast<size_t>(cfg.k), n);
  const auto by_key_then_id = [](const Neighbor& a, const Neighbor& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.row_id < b.row_id;
  };
  std::partial_sort(all.begin(), all.begin() + kk, all.end(), by_key_then_id);
  return vote({all.data(), kk}, cfg.metric, cfg.weighting);
}

void check_config(const KnnConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("KnnConfig: k must be >= 1");
}

}  // namespace

double distance(std::span<const double> a, std::span<const double> b,
                const FeatureSubset& subset, DistanceMetric metric) {
  if (subset.empty()) throw std::invalid_argument("distance: empty subset");
  for (int idx : subset.indices())
    if (idx < 1 || static_cast<size_t>(idx) > a.size() ||
        static_cast<size_t>(idx) > b.size())
      throw std::out_of_range("distance: feature " + std::to_string(idx) +
                              " out of range");
  return key_to_distance(distance_key(a, b, subset.indices(), metric), metric);
}

AttackCategory predict(const Dataset& train, std::span<const double> query,
                       const FeatureSubset& subset, const KnnConfig& cfg) {
  if (train.rows() == 0)
    throw std::invalid_argument("predict: empty training set");
  if (subset.empty()) throw std::invalid_argument("predict: empty subset");
  if (query.size() != train.cols())
    throw std::invalid_argument("predict: query width mismatch");
  check_config(cfg);
  subset.validate_against(train.schema());
  PredictScratch scratch;
  return predict_impl(train, query, subset, cfg, scratch);
}

EvaluationReport evaluate(const Dataset& train, const Dataset& test,
                          const FeatureSubset& subset, const KnnConfig& cfg,
                          int threads) {
  if (train.rows() == 0)
    throw std::invalid_argument("evaluate: empty training set");
  if (test.rows() == 0) throw std::invalid_argument("evaluate: empty test set");
  if (!train.schema().compatible_with(test.schema()))
    throw std::invalid_argument("evaluate: train/test schema mismatch");
  if (subset.empty()) throw std::invalid_argument("evaluate: empty subset");
  check_config(cfg);
  subset.validate_against(train.schema());

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<AttackCategory> predictions(test.rows());
  parallel_for(test.rows(), threads, [&](size_t begin, size_t end) {
    PredictScratch scratch;
    for (size_t r = begin; r < end; ++r)
      predictions[r] = predict_impl(train, test.row(r), subset, cfg, scratch);
  });

  EvaluationReport report;
  report.total = test.rows();
  for (size_t r = 0; r < test.rows(); ++r) {
    const auto actual = static_cast<size_t>(test.label(r));
    const auto predicted = static_cast<size_t>(predictions[r]);
    report.confusion[actual][predicted]++;
    if (actual == predicted) report.positives++;
  }
  report.accuracy = static_cast<double>(report.positives) /
                    static_cast<double>(report.total);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

void report_to_csv(const EvaluationReport& report, std::ostream& out) {
  out << csv::format_double(report.accuracy) << ',' << report.positives << ','
      << report.total << '\n';
}

nlohmann::ordered_json report_to_json(const EvaluationReport& report,
                                      bool include_timing) {
  nlohmann::ordered_json j;
  j["accuracy"] = report.accuracy;
  j["positives"] = report.positives;
  j["total"] = report.total;
  nlohmann::ordered_json confusion = nlohmann::ordered_json::object();
  for (int a = 0; a < kCategoryCount; ++a) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (int p = 0; p < kCategoryCount; ++p)
      row[category_name(static_cast<AttackCategory>(p))] =
          report.confusion[static_cast<size_t>(a)][static_cast<size_t>(p)];
    confusion[category_name(static_cast<AttackCategory>(a))] = std::move(row);
  }
  j["confusion"] = std::move(confusion);
  if (include_timing) j["elapsed_seconds"] = report.elapsed_seconds;
  return j;
}

}  // namespace kddfs
