#pragma once

// Brute-force reference implementations used only by tests. Everything here
// recomputes results with naive dense arithmetic and independent logic so
// the production code can be checked against it. The only production code
// reused is porter_stem, which has its own frozen word-pair oracle.

#include <map>
#include <string>
#include <vector>

#include "cwemap/corpus.hpp"
#include "cwemap/preprocess.hpp"
#include "cwemap/weights.hpp"

namespace oracle {

/// Regex-based reimplementation of the token pipeline
/// (lowercase -> split -> filter -> stem).
std::vector<std::string> stem_tokens(const std::string& content, const cwemap::StopWordList& stops);

/// Space-joined k-windows per segment, concatenated over the document.
std::vector<std::string> document_grams(const cwemap::RawDocument& document, int k,
                                        const cwemap::StopWordList& stops);

/// Corpus-wide gram totals, pruned to totals > 2, sorted.
std::vector<std::string> vocabulary(const cwemap::Corpus& corpus, int k,
                                    const cwemap::StopWordList& stops);

/// Dense document-by-gram count matrix over the given vocabulary.
std::vector<std::vector<long>> count_matrix(const cwemap::Corpus& corpus,
                                            const std::vector<std::string>& vocab, int k,
                                            const cwemap::StopWordList& stops);

/// Direct transcription of the five weighting formulas over a dense count
/// matrix.
std::vector<std::vector<double>> weight_matrix(const std::vector<std::vector<long>>& counts,
                                               cwemap::WeightScheme scheme, double beta);

std::vector<std::vector<double>> cosine(const std::vector<std::vector<double>>& weights);
std::vector<std::vector<double>> jaccard(const std::vector<std::vector<double>>& weights);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix; pairs ordered by
/// |eigenvalue| descending.
struct JacobiEig {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // vectors[p] is the p-th eigenvector
};
JacobiEig jacobi_eig(std::vector<std::vector<double>> matrix);

/// Jacobi-based reconstruction with eigenvalues at or below the threshold
/// zeroed.
std::vector<std::vector<double>> lsa_reduce(const std::vector<std::vector<double>>& symmetric,
                                            double threshold);

/// Power iteration with deflation; returns singular values in descending
/// order. Intended for symmetric positive semidefinite inputs.
std::vector<double> power_iteration_singular_values(std::vector<std::vector<double>> matrix,
                                                    unsigned seed = 12345);

struct NaiveMapping {
  std::string vulnerability_id;
  std::string predicted_cwe;  // empty when unmappable
  double score = 0.0;
};

/// Row-argmax mapping over a dense vulnerability-by-weakness block with the
/// tie rule (ground truth preferred, lowest id otherwise).
std::vector<NaiveMapping> map_rows(const std::vector<std::vector<double>>& block,
                                   const std::vector<std::string>& vulnerability_ids,
                                   const std::vector<std::string>& weakness_ids,
                                   const std::map<std::string, std::string>& ground_truth);

struct NaiveCounts {
  std::size_t same = 0;
  std::size_t different = 0;
};

/// Same/different tallies per repository name plus the "all" aggregate.
std::map<std::string, NaiveCounts> precision_counts(
    const std::vector<NaiveMapping>& mappings, const std::map<std::string, std::string>& ground_truth,
    const std::map<std::string, std::string>& repository_of);

}  // namespace oracle
