#ifndef KDDFS_ENTROPY_HPP
#define KDDFS_ENTROPY_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "kddfs/dataset.hpp"

namespace kddfs {

enum class BinningMethod { EqualFrequency, EqualWidth };

struct DiscretizationSpec {
  BinningMethod method = BinningMethod::EqualFrequency;
  int bins = 10;  // >= 2; continuous features only, codes bin themselves
};

// Entropy of the category distribution, in bits. Empty classes contribute 0.
double class_entropy(std::span<const AttackCategory> labels);

// Upper-inclusive cut values at the k/bins rank quantiles, duplicates
// merged. bin(v) = number of cuts strictly below v.
std::vector<double> equal_frequency_cuts(std::span<const double> column,
                                         int bins);

// Maps a column to bin ids. Discrete features use their codes directly;
// continuous ones are cut per the DiscretizationSpec.
std::vector<int> discretize(std::span<const double> column, FeatureKind kind,
                            const DiscretizationSpec& spec);

// Conditional entropy of the labels given the bin partition, in bits.
double expected_info(std::span<const int> bins,
                     std::span<const AttackCategory> labels);

// class_entropy - expected_info, with tiny negative round-off clamped to 0.
double information_gain(std::span<const int> bins,
                        std::span<const AttackCategory> labels);

// Gain on the one-vs-rest relabeling (label == target vs. not).
double per_class_gain(std::span<const int> bins,
                      std::span<const AttackCategory> labels,
                      AttackCategory target);

struct FeatureGain {
  int index = 0;
  std::string name;
  double gain = 0.0;
  std::array<double, kCategoryCount> per_class{};
};

struct GainTable {
  double class_entropy = 0.0;
  std::vector<FeatureGain> features;  // ordered by feature index
  std::vector<int> ranking;           // feature indices, highest gain first,
                                      // ties by ascending index
};

// Filter phase: gains for every feature of the training set. Per-feature
// work may run on several threads; the result is identical either way.
GainTable build_gain_table(const Dataset& train, const DiscretizationSpec& spec,
                           int threads = 1);

}  // namespace kddfs

#endif
