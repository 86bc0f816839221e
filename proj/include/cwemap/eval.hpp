#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwemap/similarity.hpp"

namespace cwemap {

/// One precision figure: agreements over agreements plus disagreements,
/// undefined when the cell is empty. `repository` is absent for the
/// all-repositories aggregate.
struct PrecisionCell {
  WeightScheme scheme = WeightScheme::Tf;
  int k = 1;
  bool lsa = false;
  std::optional<Repository> repository;
  std::size_t same = 0;
  std::size_t different = 0;

  std::optional<double> precision() const {
    if (same + different == 0) return std::nullopt;
    return static_cast<double>(same) / static_cast<double>(same + different);
  }
};

/// Per-gram-order corpus shape figures: column count and mean document
/// lengths overall and per document class.
struct DescriptiveStatsRow {
  int k = 1;
  std::size_t unique_kgrams = 0;
  double avg_document_length = 0.0;
  double avg_weakness_length = 0.0;
  double avg_vulnerability_length = 0.0;
};

/// Counts agreements between predictions and ground truth. Only labeled
/// vulnerabilities are counted; a labeled vulnerability with no prediction
/// counts as a disagreement.
PrecisionCell precision(const std::vector<VulnMapping>& mappings,
                        const std::map<std::string, GroundTruthLabel>& labels);

/// One cell per repository that has labeled vulnerabilities, plus the
/// aggregate over all of them (repository = nullopt, listed last). The
/// aggregate's counts are the sums of the per-repository counts.
std::vector<PrecisionCell> per_repository_precision(
    const std::vector<VulnMapping>& mappings, const std::map<std::string, GroundTruthLabel>& labels,
    const Corpus& corpus);

DescriptiveStatsRow descriptive_stats(const Corpus& corpus, const Vocabulary& vocab,
                                      const std::vector<DocumentTermCounts>& counts);

/// Row maxima of the vulnerability-by-weakness matrix, in row order.
std::vector<std::pair<std::string, double>> similarity_distribution(const MappingMatrix& matrix);

/// Restriction of the document similarity matrix to weakness rows and
/// columns, labeled by weakness id.
DenseMatrix weakness_similarity_grid(const DenseMatrix& doc_similarity, const Corpus& corpus);

}  // namespace cwemap
