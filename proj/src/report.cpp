#include "cwemap/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "cwemap/csv.hpp"
#include "cwemap/errors.hpp"
#include "cwemap/pipeline.hpp"

namespace cwemap {

namespace {

struct ParsedCellName {
  WeightScheme scheme;
  int k;
  bool lsa;
};

std::optional<ParsedCellName> parse_mapping_name(const std::string& filename) {
  // mapping_<scheme>_k<order>[_lsa].csv
  if (filename.rfind("mapping_", 0) != 0 || filename.size() < 4 ||
      filename.substr(filename.size() - 4) != ".csv") {
    return std::nullopt;
  }
  std::string core = filename.substr(8, filename.size() - 12);
  bool lsa = false;
  if (core.size() > 4 && core.substr(core.size() - 4) == "_lsa") {
    lsa = true;
    core = core.substr(0, core.size() - 4);
  }
  std::size_t sep = core.rfind("_k");
  if (sep == std::string::npos || sep + 2 >= core.size()) return std::nullopt;
  ParsedCellName parsed;
  parsed.lsa = lsa;
  try {
    parsed.scheme = parse_scheme(core.substr(0, sep));
    parsed.k = std::stoi(core.substr(sep + 2));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return parsed;
}

}  // namespace

ReportOutput build_report(const std::filesystem::path& out_dir) {
  if (!std::filesystem::is_directory(out_dir)) {
    throw UserError("output directory does not exist: " + out_dir.string());
  }
  const std::filesystem::path inventory_path = out_dir / "inventory.csv";
  if (!std::filesystem::exists(inventory_path)) {
    throw UserError("missing artifact: " + inventory_path.string());
  }

  std::map<std::string, Repository> repo_of;
  {
    auto rows = csv::parse(csv::read_file(inventory_path));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() < 3) {
        throw UserError("malformed inventory row " + std::to_string(i + 1));
      }
      if (rows[i][1] == "vulnerability") {
        repo_of[rows[i][0]] = parse_repository(rows[i][2]);
      }
    }
  }

  // Rebuild cells from every mapping CSV, in canonical order.
  std::vector<std::pair<ParsedCellName, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(out_dir)) {
    if (!entry.is_regular_file()) continue;
    if (auto parsed = parse_mapping_name(entry.path().filename().string())) {
      files.emplace_back(*parsed, entry.path());
    }
  }
  if (files.empty()) {
    throw UserError("no mapping artifacts in " + out_dir.string());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    if (a.first.scheme != b.first.scheme) return a.first.scheme < b.first.scheme;
    if (a.first.k != b.first.k) return a.first.k < b.first.k;
    return a.first.lsa < b.first.lsa;
  });

  std::vector<GridCell> cells;
  for (const auto& [name, path] : files) {
    auto rows = csv::parse(csv::read_file(path));
    GridCell cell;
    cell.scheme = name.scheme;
    cell.k = name.k;
    cell.lsa = name.lsa;

    static constexpr Repository kOrder[] = {Repository::Maven, Repository::Pip, Repository::Npm,
                                            Repository::RubyGems};
    std::map<Repository, PrecisionCell> per_repo;
    PrecisionCell all;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (row.size() < 7) {
        throw UserError("malformed mapping row in " + path.string());
      }
      const std::string& vuln_id = row[0];
      const std::string& predicted = row[1];
      const std::string& ground_truth = row[5];
      if (ground_truth.empty()) continue;
      auto repo = repo_of.find(vuln_id);
      if (repo == repo_of.end()) {
        throw UserError("mapping row for unknown vulnerability " + vuln_id + " in " +
                        path.string());
      }
      const bool same = predicted == ground_truth;
      PrecisionCell& cell_repo = per_repo[repo->second];
      cell_repo.repository = repo->second;
      (same ? cell_repo.same : cell_repo.different) += 1;
      (same ? all.same : all.different) += 1;
    }
    for (Repository repo : kOrder) {
      auto it = per_repo.find(repo);
      if (it != per_repo.end()) cell.precision.push_back(it->second);
    }
    cell.precision.push_back(all);
    for (PrecisionCell& pc : cell.precision) {
      pc.scheme = cell.scheme;
      pc.k = cell.k;
      pc.lsa = cell.lsa;
    }
    cells.push_back(std::move(cell));
  }

  ReportOutput output;
  output.precision_csv = serialize_precision_cells(cells);

  std::ostringstream table;
  table << std::left << std::setw(9) << "scheme" << std::setw(3) << "k" << std::setw(5) << "lsa"
        << std::setw(10) << "repository" << std::right << std::setw(6) << "same" << std::setw(11)
        << "different" << "  precision\n";
  for (const GridCell& cell : cells) {
    for (const PrecisionCell& pc : cell.precision) {
      std::optional<double> value = pc.precision();
      table << std::left << std::setw(9) << scheme_name(pc.scheme) << std::setw(3) << pc.k
            << std::setw(5) << (pc.lsa ? "on" : "off") << std::setw(10)
            << (pc.repository ? repository_name(*pc.repository) : "all") << std::right
            << std::setw(6) << pc.same << std::setw(11) << pc.different << "  "
            << (value ? csv::format_real(*value) : "NA") << '\n';
    }
  }
  output.table = table.str();
  return output;
}

}  // namespace cwemap
