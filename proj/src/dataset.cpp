#include "kddfs/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kddfs/csv.hpp"
#include "kddfs/rng.hpp"

namespace kddfs {

int CategoryDictionary::encode(int feature_index, const std::string& token) {
  PerFeature& f = features_[feature_index];
  if (auto it = f.codes.find(token); it != f.codes.end()) return it->second;
  const int code = static_cast<int>(f.tokens.size());
  f.codes.emplace(token, code);
  f.tokens.push_back(token);
  return code;
}

std::optional<int> CategoryDictionary::find(int feature_index,
                                            const std::string& token) const {
  auto fit = features_.find(feature_index);
  if (fit == features_.end()) return std::nullopt;
  auto it = fit->second.codes.find(token);
  if (it == fit->second.codes.end()) return std::nullopt;
  return it->second;
}

const std::string& CategoryDictionary::decode(int feature_index,
                                              int code) const {
  auto fit = features_.find(feature_index);
  if (fit == features_.end() || code < 0 ||
      code >= static_cast<int>(fit->second.tokens.size()))
    throw std::out_of_range("CategoryDictionary: no code " +
                            std::to_string(code) + " for feature " +
                            std::to_string(feature_index));
  return fit->second.tokens[static_cast<size_t>(code)];
}

size_t CategoryDictionary::code_count(int feature_index) const {
  auto fit = features_.find(feature_index);
  return fit == features_.end() ? 0 : fit->second.tokens.size();
}

std::vector<double> Dataset::column(int feature_index) const {
  const size_t c0 = static_cast<size_t>(feature_index) - 1;
  if (feature_index < 1 || c0 >= cols())
    throw std::out_of_range("Dataset::column: no feature " +
                            std::to_string(feature_index));
  std::vector<double> out(rows());
  for (size_t r = 0; r < rows(); ++r) out[r] = value(r, c0);
  return out;
}

void Dataset::append_row(std::span<const double> values, AttackCategory label,
                         std::string raw_label) {
  append_row(values, label, std::move(raw_label),
             static_cast<uint64_t>(rows()));
}

void Dataset::append_row(std::span<const double> values, AttackCategory label,
                         std::string raw_label, uint64_t id) {
  if (values.size() != cols())
    throw std::invalid_argument("Dataset::append_row: expected " +
                                std::to_string(cols()) + " values, got " +
                                std::to_string(values.size()));
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
  raw_labels_.push_back(std::move(raw_label));
  row_ids_.push_back(id);
}

Dataset Dataset::take_rows(std::span<const size_t> row_indices) const {
  Dataset out(schema_);
  out.values_.reserve(row_indices.size() * cols());
  out.labels_.reserve(row_indices.size());
  out.raw_labels_.reserve(row_indices.size());
  out.row_ids_.reserve(row_indices.size());
  for (size_t r : row_indices) {
    if (r >= rows()) throw std::out_of_range("Dataset::take_rows: bad index");
    out.append_row(row(r), labels_[r], raw_labels_[r], row_ids_[r]);
  }
  return out;
}

bool Dataset::content_equals(const Dataset& other) const {
  if (rows() != other.rows() || cols() != other.cols()) return false;
  for (size_t i = 0; i < cols(); ++i) {
    const FeatureDesc& a = schema_.features()[i];
    const FeatureDesc& b = other.schema_.features()[i];
    if (a.name != b.name || a.kind != b.kind) return false;
  }
  return values_ == other.values_ && labels_ == other.labels_ &&
         raw_labels_ == other.raw_labels_;
}

namespace {

// Splits on commas; connection records never quote fields.
void split_plain(const std::string& line, std::vector<std::string>& out) {
  out.clear();
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::pair<Dataset, CategoryDictionary> parse_kdd_file(
    const std::string& path, const FeatureSchema& schema,
    CategoryDictionary dict, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  Dataset ds(schema);
  const size_t n_features = schema.feature_count();
  std::vector<std::string> fields;
  std::vector<double> row(n_features);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    split_plain(line, fields);
    if (fields.size() != n_features + 1)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(n_features + 1) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    for (size_t i = 0; i < n_features; ++i) {
      const FeatureDesc& desc = schema.features()[i];
      if (desc.kind == FeatureKind::Discrete) {
        row[i] = dict.encode(desc.index, fields[i]);
      } else {
        double v = 0.0;
        if (!csv::try_parse_double(fields[i], v))
          throw ParseError(path + ":" + std::to_string(line_no) +
                               ": feature " + std::to_string(desc.index) +
                               " (" + desc.name + ") is not numeric: '" +
                               fields[i] + "'",
                           line_no);
        row[i] = v;
      }
    }
    std::string raw = fields[n_features];
    if (!raw.empty() && raw.back() == '.') raw.pop_back();
    AttackCategory cat;
    try {
      cat = map_attack_label(raw, opts.labels);
    } catch (const std::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what(),
                       line_no);
    }
    ds.append_row(row, cat, std::move(raw));
  }
  return {std::move(ds), std::move(dict)};
}

TrainTest parse_kdd_pair(const std::string& train_path,
                         const std::string& test_path,
                         const FeatureSchema& schema,
                         const ParseOptions& opts) {
  auto [train, dict] = parse_kdd_file(train_path, schema, {}, opts);
  auto [test, dict2] = parse_kdd_file(test_path, schema, std::move(dict), opts);
  return {std::move(train), std::move(test), std::move(dict2)};
}

Dataset sample(const Dataset& ds, size_t n, uint64_t seed) {
  if (n > ds.rows())
    throw std::invalid_argument("sample: n=" + std::to_string(n) +
                                " exceeds available rows " +
                                std::to_string(ds.rows()));
  std::vector<size_t> indices(ds.rows());
  std::iota(indices.begin(), indices.end(), size_t{0});
  Rng rng(seed);
  // partial Fisher-Yates: the first n entries are the draw
  for (size_t i = 0; i < n && i + 1 < indices.size(); ++i) {
    const size_t j = i + static_cast<size_t>(rng.below(indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(n);
  std::sort(indices.begin(), indices.end());
  return ds.take_rows(indices);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  if (spec.mode == SplitMode::TwoFiles)
    throw std::invalid_argument(
        "split: two-files mode is resolved at load time (parse_kdd_pair)");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw std::invalid_argument("split: train_fraction must be in (0,1)");

  std::vector<size_t> indices(ds.rows());
  std::iota(indices.begin(), indices.end(), size_t{0});
  Rng rng(spec.seed);
  rng.shuffle(indices);
  if (spec.sample_size > 0 && spec.sample_size < indices.size())
    indices.resize(spec.sample_size);

  const size_t n = indices.size();
  const size_t n_train =
      static_cast<size_t>(std::llround(spec.train_fraction * double(n)));
  if (n_train == 0 || n_train >= n)
    throw std::invalid_argument("split: fraction " +
                                std::to_string(spec.train_fraction) +
                                " leaves an empty side for " +
                                std::to_string(n) + " rows");

  std::vector<size_t> train_idx(indices.begin(), indices.begin() + n_train);
  std::vector<size_t> test_idx(indices.begin() + n_train, indices.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {ds.take_rows(train_idx), ds.take_rows(test_idx)};
}

std::vector<MinMax> min_max_stats(const Dataset& ds) {
  if (ds.rows() == 0)
    throw std::invalid_argument("min_max_stats: empty dataset");
  std::vector<MinMax> stats(ds.cols());
  for (size_t c = 0; c < ds.cols(); ++c)
    stats[c] = {ds.value(0, c), ds.value(0, c)};
  for (size_t r = 1; r < ds.rows(); ++r) {
    const auto row = ds.row(r);
    for (size_t c = 0; c < ds.cols(); ++c) {
      stats[c].min = std::min(stats[c].min, row[c]);
      stats[c].max = std::max(stats[c].max, row[c]);
    }
  }
  return stats;
}

Dataset apply_min_max(const Dataset& ds, const std::vector<MinMax>& stats) {
  if (stats.size() != ds.cols())
    throw std::invalid_argument("apply_min_max: stats width mismatch");
  Dataset out(ds.schema());
  std::vector<double> row(ds.cols());
  for (size_t r = 0; r < ds.rows(); ++r) {
    const auto src = ds.row(r);
    for (size_t c = 0; c < ds.cols(); ++c) {
      const double range = stats[c].max - stats[c].min;
      row[c] = range > 0.0 ? (src[c] - stats[c].min) / range : 0.0;
    }
    out.append_row(row, ds.label(r), ds.raw_label(r), ds.row_id(r));
  }
  return out;
}

void write_canonical(const Dataset& ds, std::ostream& out) {
  const auto& features = ds.schema().features();
  for (const FeatureDesc& f : features) {
    out << f.name << ':'
        << (f.kind == FeatureKind::Discrete ? 'D' : 'C') << ',';
  }
  out << "label\n";
  for (size_t r = 0; r < ds.rows(); ++r) {
    const auto row = ds.row(r);
    for (double v : row) out << csv::format_double(v) << ',';
    out << csv::quote(ds.raw_label(r)) << '\n';
  }
}

void write_canonical_file(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_canonical(ds, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset parse_canonical(std::istream& in, const ParseOptions& opts) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("canonical dataset: missing header", 0);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header = csv::split_line(line);
  if (header.empty() || header.back() != "label")
    throw ParseError("canonical dataset: header must end with 'label'", 1);
  std::vector<FeatureDesc> features;
  for (size_t i = 0; i + 1 < header.size(); ++i) {
    const std::string& h = header[i];
    const size_t colon = h.rfind(':');
    if (colon == std::string::npos || colon + 2 != h.size() ||
        (h[colon + 1] != 'C' && h[colon + 1] != 'D'))
      throw ParseError("canonical dataset: bad header field '" + h + "'", 1);
    features.push_back({static_cast<int>(i) + 1, h.substr(0, colon),
                        h[colon + 1] == 'D' ? FeatureKind::Discrete
                                            : FeatureKind::Continuous});
  }

  Dataset ds{FeatureSchema(std::move(features))};
  const size_t n_features = ds.cols();
  std::vector<double> row(n_features);
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = csv::split_line(line);
    if (fields.size() != n_features + 1)
      throw ParseError("canonical dataset line " + std::to_string(line_no) +
                           ": expected " + std::to_string(n_features + 1) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no);
    for (size_t i = 0; i < n_features; ++i) {
      if (!csv::try_parse_double(fields[i], row[i]))
        throw ParseError("canonical dataset line " + std::to_string(line_no) +
                             ": field " + std::to_string(i + 1) +
                             " is not numeric: '" + fields[i] + "'",
                         line_no);
    }
    std::string raw = fields[n_features];
    AttackCategory cat;
    try {
      cat = map_attack_label(raw, opts.labels);
    } catch (const std::exception& e) {
      throw ParseError("canonical dataset line " + std::to_string(line_no) +
                           ": " + e.what(),
                       line_no);
    }
    ds.append_row(row, cat, std::move(raw));
  }
  return ds;
}

Dataset parse_canonical_file(const std::string& path,
                             const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return parse_canonical(in, opts);
}

}  // namespace kddfs
