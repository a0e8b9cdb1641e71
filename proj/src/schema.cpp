#include "kddfs/schema.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace kddfs {

const char* category_name(AttackCategory c) {
  switch (c) {
    case AttackCategory::Normal: return "normal";
    case AttackCategory::Dos: return "dos";
    case AttackCategory::Probe: return "probe";
    case AttackCategory::R2L: return "r2l";
    case AttackCategory::U2R: return "u2r";
  }
  throw std::logic_error("bad AttackCategory");
}

std::optional<AttackCategory> category_from_name(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (AttackCategory c : kAllCategories)
    if (s == category_name(c)) return c;
  return std::nullopt;
}

FeatureSchema::FeatureSchema(std::vector<FeatureDesc> features)
    : features_(std::move(features)) {
  for (size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].index != static_cast<int>(i) + 1)
      throw std::invalid_argument(
          "FeatureSchema: indices must be contiguous starting at 1");
  }
}

FeatureSchema FeatureSchema::kdd41() {
  static const struct {
    const char* name;
    FeatureKind kind;
  } kTable[41] = {
      {"duration", FeatureKind::Continuous},
      {"protocol_type", FeatureKind::Discrete},
      {"service", FeatureKind::Discrete},
      {"flag", FeatureKind::Discrete},
      {"src_bytes", FeatureKind::Continuous},
      {"dst_bytes", FeatureKind::Continuous},
      {"land", FeatureKind::Discrete},
      {"wrong_fragment", FeatureKind::Continuous},
      {"urgent", FeatureKind::Continuous},
      {"hot", FeatureKind::Continuous},
      {"num_failed_logins", FeatureKind::Continuous},
      {"logged_in", FeatureKind::Discrete},
      {"num_compromised", FeatureKind::Continuous},
      {"root_shell", FeatureKind::Continuous},
      {"su_attempted", FeatureKind::Continuous},
      {"num_root", FeatureKind::Continuous},
      {"num_file_creations", FeatureKind::Continuous},
      {"num_shells", FeatureKind::Continuous},
      {"num_access_files", FeatureKind::Continuous},
      {"num_outbound_cmds", FeatureKind::Continuous},
      {"is_host_login", FeatureKind::Discrete},
      {"is_guest_login", FeatureKind::Discrete},
      {"count", FeatureKind::Continuous},
      {"srv_count", FeatureKind::Continuous},
      {"serror_rate", FeatureKind::Continuous},
      {"srv_serror_rate", FeatureKind::Continuous},
      {"rerror_rate", FeatureKind::Continuous},
      {"srv_rerror_rate", FeatureKind::Continuous},
      {"same_srv_rate", FeatureKind::Continuous},
      {"diff_srv_rate", FeatureKind::Continuous},
      {"srv_diff_host_rate", FeatureKind::Continuous},
      {"dst_host_count", FeatureKind::Continuous},
      {"dst_host_srv_count", FeatureKind::Continuous},
      {"dst_host_same_srv_rate", FeatureKind::Continuous},
      {"dst_host_diff_srv_rate", FeatureKind::Continuous},
      {"dst_host_same_src_port_rate", FeatureKind::Continuous},
      {"dst_host_srv_diff_host_rate", FeatureKind::Continuous},
      {"dst_host_serror_rate", FeatureKind::Continuous},
      {"dst_host_srv_serror_rate", FeatureKind::Continuous},
      {"dst_host_rerror_rate", FeatureKind::Continuous},
      {"dst_host_srv_rerror_rate", FeatureKind::Continuous},
  };
  std::vector<FeatureDesc> features;
  features.reserve(41);
  for (int i = 0; i < 41; ++i)
    features.push_back({i + 1, kTable[i].name, kTable[i].kind});
  return FeatureSchema(std::move(features));
}

const FeatureDesc& FeatureSchema::feature(int index) const {
  if (index < 1 || index > static_cast<int>(features_.size()))
    throw std::out_of_range("FeatureSchema: no feature " +
                            std::to_string(index));
  return features_[static_cast<size_t>(index) - 1];
}

bool FeatureSchema::compatible_with(const FeatureSchema& other) const {
  if (features_.size() != other.features_.size()) return false;
  for (size_t i = 0; i < features_.size(); ++i)
    if (features_[i].kind != other.features_[i].kind) return false;
  return true;
}

std::string normalize_label(std::string_view raw) {
  std::string s(raw);
  if (!s.empty() && s.back() == '.') s.pop_back();
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

namespace {

const std::unordered_map<std::string, AttackCategory>& builtin_attack_map() {
  static const std::unordered_map<std::string, AttackCategory> kMap = {
      {"normal", AttackCategory::Normal},
      // denial of service
      {"smurf", AttackCategory::Dos},
      {"neptune", AttackCategory::Dos},
      {"back", AttackCategory::Dos},
      {"teardrop", AttackCategory::Dos},
      {"pod", AttackCategory::Dos},
      {"land", AttackCategory::Dos},
      // probing
      {"satan", AttackCategory::Probe},
      {"ipsweep", AttackCategory::Probe},
      {"portsweep", AttackCategory::Probe},
      {"nmap", AttackCategory::Probe},
      // remote to local
      {"warezclient", AttackCategory::R2L},
      {"guess_passwd", AttackCategory::R2L},
      {"warezmaster", AttackCategory::R2L},
      {"imap", AttackCategory::R2L},
      {"ftp_write", AttackCategory::R2L},
      {"multihop", AttackCategory::R2L},
      {"phf", AttackCategory::R2L},
      {"spy", AttackCategory::R2L},
      // user to root
      {"buffer_overflow", AttackCategory::U2R},
      {"rootkit", AttackCategory::U2R},
      {"loadmodule", AttackCategory::U2R},
      {"perl", AttackCategory::U2R},
      // category names double as labels so synthetic files round-trip
      {"dos", AttackCategory::Dos},
      {"probe", AttackCategory::Probe},
      {"r2l", AttackCategory::R2L},
      {"u2r", AttackCategory::U2R},
  };
  return kMap;
}

}  // namespace

AttackCategory map_attack_label(std::string_view name,
                                const LabelPolicy& policy) {
  const std::string key = normalize_label(name);
  const auto& builtin = builtin_attack_map();
  if (auto it = builtin.find(key); it != builtin.end()) return it->second;
  if (auto it = policy.extensions.find(key); it != policy.extensions.end())
    return it->second;
  if (policy.strict)
    throw std::runtime_error("unknown attack label '" + key + "'");
  return policy.fallback;
}

std::unordered_map<std::string, AttackCategory> load_category_extensions(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open extension table: " + path);
  std::unordered_map<std::string, AttackCategory> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'attack_name,category'");
    const std::string name = normalize_label(line.substr(0, comma));
    const auto cat = category_from_name(line.substr(comma + 1));
    if (!cat)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": unknown category '" + line.substr(comma + 1) +
                               "'");
    out[name] = *cat;
  }
  return out;
}

}  // namespace kddfs
