#ifndef KDDFS_SCHEMA_HPP
#define KDDFS_SCHEMA_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kddfs {

// The five connection categories, in canonical tie-break order.
enum class AttackCategory { Normal = 0, Dos = 1, Probe = 2, R2L = 3, U2R = 4 };

inline constexpr int kCategoryCount = 5;

inline constexpr std::array<AttackCategory, kCategoryCount> kAllCategories = {
    AttackCategory::Normal, AttackCategory::Dos, AttackCategory::Probe,
    AttackCategory::R2L, AttackCategory::U2R};

const char* category_name(AttackCategory c);
std::optional<AttackCategory> category_from_name(std::string_view name);

enum class FeatureKind { Continuous, Discrete };

struct FeatureDesc {
  int index = 0;  // 1-based column position
  std::string name;
  FeatureKind kind = FeatureKind::Continuous;
};

// Ordered feature descriptors; the class label always occupies the column
// after the last feature.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureDesc> features);

  // The 41-feature connection-record layout: 7 symbolic features
  // (2,3,4,7,12,21,22), 34 numeric.
  static FeatureSchema kdd41();

  size_t feature_count() const { return features_.size(); }
  const FeatureDesc& feature(int index) const;  // 1-based
  const std::vector<FeatureDesc>& features() const { return features_; }
  int label_position() const { return static_cast<int>(features_.size()) + 1; }

  // Same width and per-column kinds; names may differ.
  bool compatible_with(const FeatureSchema& other) const;

 private:
  std::vector<FeatureDesc> features_;
};

// How unrecognized attack names are handled.
struct LabelPolicy {
  bool strict = true;
  AttackCategory fallback = AttackCategory::Normal;
  std::unordered_map<std::string, AttackCategory> extensions;
};

// Lowercases and strips one trailing '.'.
std::string normalize_label(std::string_view raw);

// Maps an attack name to its category. Built-in table covers the 23 names of
// the 10% corpus plus the category names themselves as aliases; extensions
// are consulted next. Unknown names throw in strict mode, otherwise map to
// policy.fallback.
AttackCategory map_attack_label(std::string_view name,
                                const LabelPolicy& policy = {});

// Plain text, one "attack_name,category" pair per line; '#' starts a comment.
std::unordered_map<std::string, AttackCategory> load_category_extensions(
    const std::string& path);

}  // namespace kddfs

#endif
