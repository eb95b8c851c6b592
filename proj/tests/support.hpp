#pragma once

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "qibg/matrix_io.hpp"

namespace qibg::test {

inline IntegerMatrix imat(std::initializer_list<std::initializer_list<long>> rows) {
  IntegerMatrix m(rows.size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (long v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline RationalMatrix qmat(std::initializer_list<std::initializer_list<long>> rows) { return to_rational(imat(rows)); }

inline std::filesystem::path golden_path(const std::string& name) { return std::filesystem::path(QIBG_GOLDEN_DIR) / name; }

// Compares `actual` against a checked-in golden file. With QIBG_UPDATE_GOLDEN=1
// in the environment the file is rewritten instead.
inline void expect_golden(const std::string& name, const std::string& actual) {
  const auto path = golden_path(name);
  const char* update = std::getenv("QIBG_UPDATE_GOLDEN");
  if (update != nullptr && std::string(update) == "1") {
    write_file_atomic(path, actual);
    return;
  }
  ASSERT_TRUE(std::filesystem::exists(path)) << "missing golden file " << path;
  EXPECT_EQ(read_text_file(path), actual) << "golden mismatch for " << name;
}

// Scratch directory removed at scope exit.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("qibg-test-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace qibg::test
