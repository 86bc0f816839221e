#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwemap/preprocess.hpp"

namespace cwemap {

enum class WeightScheme { Tf, TfLog, TfBool, TfIdf, DlmIdf };

inline constexpr WeightScheme kAllSchemes[] = {WeightScheme::Tf, WeightScheme::TfLog,
                                               WeightScheme::TfBool, WeightScheme::TfIdf,
                                               WeightScheme::DlmIdf};

std::string scheme_name(WeightScheme scheme);
WeightScheme parse_scheme(const std::string& name);

/// Corpus-level quantities the weighting formulas need: document
/// frequencies per column, document lengths, their mean, and the pivot
/// parameter for length normalization.
struct CorpusStats {
  std::size_t total_documents = 0;            // N = n1 + n2
  std::vector<std::uint32_t> doc_freq;        // per column
  std::vector<std::uint64_t> lengths;         // per document
  double avg_length = 0.0;
  double beta = 0.2;
};

/// Sparse document-by-gram weight matrix; one row per document, entries in
/// ascending column order. The nonzero pattern equals the count pattern
/// for every scheme.
struct WeightMatrix {
  int k = 1;
  WeightScheme scheme = WeightScheme::Tf;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> row_entries;
};

CorpusStats compute_stats(const std::vector<DocumentTermCounts>& counts, const Vocabulary& vocab,
                          double beta = 0.2);

/// The smoothed inverse document frequency factor.
double idf_factor(std::size_t total_documents, std::uint32_t doc_freq);

WeightMatrix weigh(const std::vector<DocumentTermCounts>& counts, const CorpusStats& stats,
                   WeightScheme scheme, int k = 1);

}  // namespace cwemap
