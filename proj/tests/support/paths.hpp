#pragma once

#include <filesystem>

namespace testsup {

inline std::filesystem::path fixture_dir() { return CWEMAP_FIXTURE_DIR; }
inline std::filesystem::path data_dir() { return CWEMAP_DATA_DIR; }
inline std::filesystem::path test_data_dir() { return CWEMAP_TEST_DATA_DIR; }

inline std::filesystem::path fixture_manifest() { return fixture_dir() / "manifest.json"; }
inline std::filesystem::path fixture_nvd() { return fixture_dir() / "nvd_mapping.csv"; }
inline std::filesystem::path stopwords_path() { return data_dir() / "stopwords_en.txt"; }

/// Fresh scratch directory under the current working directory (the build
/// tree when run through ctest).
inline std::filesystem::path scratch_dir(const std::string& name) {
  std::filesystem::path dir = std::filesystem::path("ctest_scratch") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsup
