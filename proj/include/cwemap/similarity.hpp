#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwemap/corpus.hpp"
#include "cwemap/groundtruth.hpp"
#include "cwemap/weights.hpp"

namespace cwemap {

/// Dense row-major matrix with optional row/column labels. Used for the
/// document-by-document similarity matrix and its reductions.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<double> values;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// The vulnerability-by-weakness restriction of a document similarity
/// matrix: one row per vulnerability, one column per weakness.
struct MappingMatrix {
  std::vector<std::string> vulnerability_ids;
  std::vector<std::string> weakness_ids;
  std::vector<double> values;

  std::size_t rows() const { return vulnerability_ids.size(); }
  std::size_t cols() const { return weakness_ids.size(); }
  double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
};

enum class TieResolution { None, GroundTruthPreference, LowestCweId };

std::string tie_resolution_name(TieResolution resolution);

/// One vulnerability's predicted weakness. `predicted_cwe` is absent
/// exactly when the row is all zero (nothing to compare against).
struct VulnMapping {
  std::string vulnerability_id;
  std::optional<std::string> predicted_cwe;
  double score = 0.0;
  bool tied = false;
  TieResolution tie_resolved_by = TieResolution::None;
};

/// Pairwise cosine similarities between weight rows. Zero rows score zero
/// against everything, including themselves; entries are clamped to [0, 1]
/// and the matrix is exactly symmetric with a unit diagonal on nonzero
/// rows. Entries are summed in fixed column order, so the result does not
/// depend on `threads`.
DenseMatrix cosine_matrix(const WeightMatrix& weights, std::vector<std::string> labels = {},
                          unsigned threads = 1);

/// Set-overlap similarity over the nonzero supports of the weight rows.
DenseMatrix jaccard_matrix(const WeightMatrix& weights, std::vector<std::string> labels = {},
                           unsigned threads = 1);

/// Restricts a document-by-document matrix to vulnerability rows and
/// weakness columns, in corpus order.
MappingMatrix extract_vuln_by_weakness(const DenseMatrix& doc_similarity, const Corpus& corpus);

/// Maps every row to the column attaining the row maximum. Ties (equality
/// within 1e-12 relative to the maximum) prefer the ground-truth weakness
/// when it is among the tied columns, otherwise the numerically lowest
/// weakness id.
std::vector<VulnMapping> map_vulnerabilities(
    const MappingMatrix& matrix, const std::map<std::string, GroundTruthLabel>& labels);

}  // namespace cwemap
