#ifndef KDDFS_DATASET_HPP
#define KDDFS_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kddfs/schema.hpp"

namespace kddfs {

// First-seen integer coding of symbolic feature values, per feature.
// Deterministic given input order; shared between train and test files so
// both sides use one encoding.
class CategoryDictionary {
 public:
  // Returns the existing code or assigns the next one.
  int encode(int feature_index, const std::string& token);
  std::optional<int> find(int feature_index, const std::string& token) const;
  const std::string& decode(int feature_index, int code) const;
  size_t code_count(int feature_index) const;

 private:
  struct PerFeature {
    std::unordered_map<std::string, int> codes;
    std::vector<std::string> tokens;
  };
  std::unordered_map<int, PerFeature> features_;
};

// Encoded record matrix plus labels. Row ids identify records by original
// file order and survive sampling/splitting; distance tie-breaks use them so
// predictions do not depend on storage order.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(FeatureSchema schema) : schema_(std::move(schema)) {}

  size_t rows() const { return labels_.size(); }
  size_t cols() const { return schema_.feature_count(); }
  const FeatureSchema& schema() const { return schema_; }

  std::span<const double> row(size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }
  double value(size_t r, size_t col0) const {
    return values_[r * cols() + col0];
  }
  std::vector<double> column(int feature_index) const;  // 1-based

  AttackCategory label(size_t r) const { return labels_[r]; }
  const std::vector<AttackCategory>& labels() const { return labels_; }
  const std::string& raw_label(size_t r) const { return raw_labels_[r]; }
  uint64_t row_id(size_t r) const { return row_ids_[r]; }

  void append_row(std::span<const double> values, AttackCategory label,
                  std::string raw_label);
  void append_row(std::span<const double> values, AttackCategory label,
                  std::string raw_label, uint64_t id);

  Dataset take_rows(std::span<const size_t> row_indices) const;

  // Schema layout, values, labels and raw labels; row ids excluded.
  bool content_equals(const Dataset& other) const;

 private:
  FeatureSchema schema_;
  std::vector<double> values_;  // row-major
  std::vector<AttackCategory> labels_;
  std::vector<std::string> raw_labels_;
  std::vector<uint64_t> row_ids_;
};

struct ParseOptions {
  LabelPolicy labels;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t line)
      : std::runtime_error(what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Reads comma-separated connection records: one record per non-empty line,
// schema.feature_count() feature fields plus the label (optional trailing
// dot). Symbolic features are encoded through dict, which is extended in
// place and returned so a later file can share the coding.
std::pair<Dataset, CategoryDictionary> parse_kdd_file(
    const std::string& path, const FeatureSchema& schema,
    CategoryDictionary dict = {}, const ParseOptions& opts = {});

struct TrainTest {
  Dataset train;
  Dataset test;
  CategoryDictionary dict;
};

// Train file first, then test file with the train dictionary carried over.
TrainTest parse_kdd_pair(const std::string& train_path,
                         const std::string& test_path,
                         const FeatureSchema& schema,
                         const ParseOptions& opts = {});

// Uniform subset without replacement, original row order preserved.
Dataset sample(const Dataset& ds, size_t n, uint64_t seed);

enum class SplitMode { RandomSplit, TwoFiles };

struct SplitSpec {
  SplitMode mode = SplitMode::RandomSplit;
  double train_fraction = 0.7;
  uint64_t seed = 1;
  size_t sample_size = 0;  // 0: use all rows
};

// Disjoint random partition covering the (optionally sampled) rows.
// TwoFiles mode is resolved at load time via parse_kdd_pair.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

struct MinMax {
  double min = 0.0;
  double max = 0.0;
};

std::vector<MinMax> min_max_stats(const Dataset& ds);

// (v - min) / (max - min) per column with the supplied (train) statistics;
// constant columns map to 0.
Dataset apply_min_max(const Dataset& ds, const std::vector<MinMax>& stats);

// Canonical encoded form: header "name:kind,...,label", then one CSV row of
// %.17g values plus the raw label. Numeric text round-trips bit-exactly.
void write_canonical(const Dataset& ds, std::ostream& out);
void write_canonical_file(const Dataset& ds, const std::string& path);
Dataset parse_canonical(std::istream& in, const ParseOptions& opts = {});
Dataset parse_canonical_file(const std::string& path,
                             const ParseOptions& opts = {});

}  // namespace kddfs

#endif
