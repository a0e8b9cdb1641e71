#ifndef KDDFS_TESTS_HELPERS_HPP
#define KDDFS_TESTS_HELPERS_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "kddfs/dataset.hpp"

namespace helpers {

// Scratch directory removed when the test ends.
class TempDir {
 public:
  TempDir() {
    base_ = std::filesystem::temp_directory_path() /
            ("kddfs_test_" + std::to_string(counter()++));
    std::filesystem::create_directories(base_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(base_, ec);
  }
  std::string path(const std::string& name) const {
    return (base_ / name).string();
  }
  std::string write(const std::string& name, const std::string& content) const {
    const std::string p = path(name);
    std::ofstream out(p);
    out << content;
    return p;
  }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path base_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Small generic all-continuous schema f1..fn.
inline kddfs::FeatureSchema plain_schema(int width) {
  std::vector<kddfs::FeatureDesc> features;
  for (int i = 0; i < width; ++i)
    features.push_back(
        {i + 1, "f" + std::to_string(i + 1), kddfs::FeatureKind::Continuous});
  return kddfs::FeatureSchema(std::move(features));
}

// Dataset from explicit rows/labels, plain schema.
inline kddfs::Dataset make_dataset(
    const std::vector<std::vector<double>>& rows,
    const std::vector<kddfs::AttackCategory>& labels) {
  kddfs::Dataset ds(plain_schema(static_cast<int>(rows.at(0).size())));
  for (size_t r = 0; r < rows.size(); ++r)
    ds.append_row(rows[r], labels[r], kddfs::category_name(labels[r]));
  return ds;
}

// A 42-field connection record with the given handful of leading fields;
// the rest are zeros.
inline std::string kdd_line(const std::string& protocol,
                            const std::string& service,
                            const std::string& flag, double src_bytes,
                            double dst_bytes, const std::string& label) {
  std::string line = "0," + protocol + "," + service + "," + flag + "," +
                     std::to_string(src_bytes) + "," +
                     std::to_string(dst_bytes);
  for (int i = 7; i <= 41; ++i) line += ",0";
  return line + "," + label + "\n";
}

}  // namespace helpers

#endif
