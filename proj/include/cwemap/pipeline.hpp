#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cwemap/eval.hpp"
#include "cwemap/lsa.hpp"

namespace cwemap {

enum class LsaMode { Off, On, Both };
enum class SimilarityKind { Cosine, Jaccard };

std::string lsa_mode_name(LsaMode mode);
LsaMode parse_lsa_mode(const std::string& name);
std::string similarity_kind_name(SimilarityKind kind);
SimilarityKind parse_similarity_kind(const std::string& name);

/// Everything one run needs. A config file provides defaults; command line
/// flags override individual fields.
struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path nvd_mapping;
  std::filesystem::path stopwords;
  std::filesystem::path out;
  std::vector<WeightScheme> schemes = {WeightScheme::Tf, WeightScheme::TfLog,
                                       WeightScheme::TfBool, WeightScheme::TfIdf,
                                       WeightScheme::DlmIdf};
  std::vector<int> gram_orders = {1, 2, 3};
  LsaMode lsa = LsaMode::Off;
  double beta = 0.2;
  double lsa_threshold = 1.0;
  SimilarityKind similarity = SimilarityKind::Cosine;
  unsigned threads = 1;
  bool dump_vocab = false;
  bool dump_weights = false;
};

/// Reads a JSON config file. Relative paths are resolved against the
/// config file's directory; unknown keys are rejected.
RunConfig load_config_file(const std::filesystem::path& path);

/// Comma-separated scheme / gram-order flag values, normalized to the
/// canonical order with duplicates removed.
std::vector<WeightScheme> parse_scheme_list(const std::string& csv_names);
std::vector<int> parse_gram_order_list(const std::string& csv_values);

struct LoadedInputs {
  Corpus corpus;
  NvdMapping nvd;
  AllowedCweSet allowed;
  StopWordList stops;
  std::vector<QualificationRecord> qualification;
  std::map<std::string, GroundTruthLabel> labels;
};

LoadedInputs load_inputs(const RunConfig& config);

/// Results for one (scheme, gram order, reduction) grid cell.
struct GridCell {
  WeightScheme scheme = WeightScheme::Tf;
  int k = 1;
  bool lsa = false;
  std::vector<VulnMapping> mappings;
  std::vector<std::pair<std::string, double>> distribution;
  std::vector<PrecisionCell> precision;  // per repository, aggregate last
  std::vector<double> spectrum;          // lsa cells only
  std::vector<char> zeroed;
  double zeroed_fraction = 0.0;
};

struct WeaknessGrid {
  WeightScheme scheme = WeightScheme::Tf;
  int k = 1;
  DenseMatrix grid;
};

struct RunResult {
  std::vector<GridCell> cells;  // canonical order: scheme, then k, then lsa
  std::vector<DescriptiveStatsRow> stats;
  std::vector<WeaknessGrid> weakness_grids;
};

/// Pure computation of the whole grid; no file output. Grid cells may be
/// computed in parallel when `config.threads` allows.
RunResult compute_grid(const LoadedInputs& inputs, const RunConfig& config);

/// Loads inputs and writes the document inventory and qualification CSVs.
void cmd_ingest(const RunConfig& config);

/// Full pipeline: ingest artifacts, one mapping and distribution CSV per
/// grid cell, spectra for reduced cells, weakness grids, descriptive
/// statistics, and the combined precision report.
void cmd_run(const RunConfig& config);

// Artifact names inside the output directory.
std::string mapping_csv_name(WeightScheme scheme, int k, bool lsa);
std::string distribution_csv_name(WeightScheme scheme, int k, bool lsa);
std::string spectrum_csv_name(WeightScheme scheme, int k);
std::string weakness_grid_csv_name(WeightScheme scheme, int k);

/// Serialization shared by cmd_run and the report command so regenerated
/// reports are byte-identical.
std::string serialize_precision_cells(const std::vector<GridCell>& cells);

}  // namespace cwemap
