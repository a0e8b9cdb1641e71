#include "kddfs/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kddfs/parallel.hpp"

namespace kddfs {

namespace {

// 0 log 0 := 0 throughout.
double entropy_from_counts(std::span<const size_t> counts, size_t total) {
  double h = 0.0;
  for (size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

void check_spec(const DiscretizationSpec& spec) {
  if (spec.bins < 2)
    throw std::invalid_argument("DiscretizationSpec: bins must be >= 2");
}

// Conditional entropy over integer labels in [0, label_count).
double conditional_entropy(std::span<const int> bins,
                           std::span<const int> labels, int label_count) {
  int max_bin = 0;
  for (int b : bins) {
    if (b < 0) throw std::invalid_argument("bin ids must be non-negative");
    max_bin = std::max(max_bin, b);
  }
  const size_t n_bins = static_cast<size_t>(max_bin) + 1;
  std::vector<size_t> counts(n_bins * static_cast<size_t>(label_count), 0);
  std::vector<size_t> bin_sizes(n_bins, 0);
  for (size_t i = 0; i < bins.size(); ++i) {
    counts[static_cast<size_t>(bins[i]) * label_count + labels[i]]++;
    bin_sizes[static_cast<size_t>(bins[i])]++;
  }
  const double total = static_cast<double>(bins.size());
  double e = 0.0;
  for (size_t b = 0; b < n_bins; ++b) {
    if (bin_sizes[b] == 0) continue;
    const std::span<const size_t> slice{counts.data() + b * label_count,
                                        static_cast<size_t>(label_count)};
    e += (static_cast<double>(bin_sizes[b]) / total) *
         entropy_from_counts(slice, bin_sizes[b]);
  }
  return e;
}

double gain_over(std::span<const int> bins, std::span<const int> labels,
                 int label_count) {
  std::vector<size_t> counts(static_cast<size_t>(label_count), 0);
  for (int l : labels) counts[static_cast<size_t>(l)]++;
  const double h = entropy_from_counts(counts, labels.size());
  const double g = h - conditional_entropy(bins, labels, label_count);
  if (g < 0.0 && g > -1e-12) return 0.0;  // float round-off guard
  return g;
}

std::vector<int> category_ids(std::span<const AttackCategory> labels) {
  std::vector<int> ids(labels.size());
  for (size_t i = 0; i < labels.size(); ++i)
    ids[i] = static_cast<int>(labels[i]);
  return ids;
}

void check_lengths(std::span<const int> bins,
                   std::span<const AttackCategory> labels) {
  if (bins.size() != labels.size())
    throw std::invalid_argument("bins and labels lengths differ: " +
                                std::to_string(bins.size()) + " vs " +
                                std::to_string(labels.size()));
  if (labels.empty()) throw std::invalid_argument("empty label sequence");
}

}  // namespace

double class_entropy(std::span<const AttackCategory> labels) {
  if (labels.empty())
    throw std::invalid_argument("class_entropy: empty label sequence");
  std::array<size_t, kCategoryCount> counts{};
  for (AttackCategory c : labels) counts[static_cast<size_t>(c)]++;
  return entropy_from_counts(counts, labels.size());
}

std::vector<double> equal_frequency_cuts(std::span<const double> column,
                                         int bins) {
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  std::vector<double> cuts;
  cuts.reserve(static_cast<size_t>(bins) - 1);
  for (int k = 1; k < bins; ++k) {
    // upper-inclusive cut at the k/bins rank quantile
    const size_t pos = static_cast<size_t>(
        std::ceil(static_cast<double>(n) * k / bins));
    cuts.push_back(sorted[std::min(pos == 0 ? 0 : pos - 1, n - 1)]);
  }
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  // a cut at the global maximum separates nothing
  if (!cuts.empty() && cuts.back() == sorted.back()) cuts.pop_back();
  return cuts;
}

std::vector<int> discretize(std::span<const double> column, FeatureKind kind,
                            const DiscretizationSpec& spec) {
  if (column.empty()) throw std::invalid_argument("discretize: empty column");
  check_spec(spec);
  std::vector<int> out(column.size());

  if (kind == FeatureKind::Discrete) {
    for (size_t i = 0; i < column.size(); ++i)
      out[i] = static_cast<int>(column[i]);
    return out;
  }

  if (spec.method == BinningMethod::EqualWidth) {
    const auto [lo_it, hi_it] = std::minmax_element(column.begin(),
                                                    column.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi) {
      std::fill(out.begin(), out.end(), 0);
      return out;
    }
    const double width = (hi - lo) / spec.bins;
    for (size_t i = 0; i < column.size(); ++i) {
      int b = static_cast<int>((column[i] - lo) / width);
      out[i] = std::min(b, spec.bins - 1);  // last interval closed
    }
    return out;
  }

  const std::vector<double> cuts = equal_frequency_cuts(column, spec.bins);
  for (size_t i = 0; i < column.size(); ++i) {
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), column[i]);
    out[i] = static_cast<int>(it - cuts.begin());  // cuts strictly below v
  }
  return out;
}

double expected_info(std::span<const int> bins,
                     std::span<const AttackCategory> labels) {
  check_lengths(bins, labels);
  return conditional_entropy(bins, category_ids(labels), kCategoryCount);
}

double information_gain(std::span<const int> bins,
                        std::span<const AttackCategory> labels) {
  check_lengths(bins, labels);
  return gain_over(bins, category_ids(labels), kCategoryCount);
}

double per_class_gain(std::span<const int> bins,
                      std::span<const AttackCategory> labels,
                      AttackCategory target) {
  check_lengths(bins, labels);
  std::vector<int> binary(labels.size());
  for (size_t i = 0; i < labels.size(); ++i)
    binary[i] = labels[i] == target ? 1 : 0;
  return gain_over(bins, binary, 2);
}

GainTable build_gain_table(const Dataset& train, const DiscretizationSpec& spec,
                           int threads) {
  if (train.rows() < 2)
    throw std::invalid_argument("build_gain_table: need at least 2 rows");
  check_spec(spec);

  GainTable table;
  table.class_entropy = class_entropy(train.labels());
  table.features.resize(train.cols());

  parallel_for(train.cols(), threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const FeatureDesc& desc = train.schema().features()[i];
      const std::vector<double> column = train.column(desc.index);
      const std::vector<int> bins = discretize(column, desc.kind, spec);
      FeatureGain& fg = table.features[i];
      fg.index = desc.index;
      fg.name = desc.name;
      fg.gain = information_gain(bins, train.labels());
      for (int c = 0; c < kCategoryCount; ++c)
        fg.per_class[static_cast<size_t>(c)] =
            per_class_gain(bins, train.labels(), static_cast<AttackCategory>(c));
    }
  });

  table.ranking.resize(train.cols());
  for (size_t i = 0; i < train.cols(); ++i)
    table.ranking[i] = static_cast<int>(i) + 1;
  std::sort(table.ranking.begin(), table.ranking.end(), [&](int a, int b) {
    const double ga = table.features[static_cast<size_t>(a) - 1].gain;
    const double gb = table.features[static_cast<size_t>(b) - 1].gain;
    if (ga != gb) return ga > gb;
    return a < b;
  });
  return table;
}

}  // namespace kddfs
