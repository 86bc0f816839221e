#pragma once

#include <filesystem>
#include <string>

namespace cwemap {

/// Precision table rebuilt purely from persisted run artifacts (the
/// inventory and the per-cell mapping CSVs).
struct ReportOutput {
  std::string table;          // human-readable grid
  std::string precision_csv;  // identical bytes to the run's precision.csv
};

ReportOutput build_report(const std::filesystem::path& out_dir);

}  // namespace cwemap
