#include "cwemap/eval.hpp"

#include <stdexcept>

#include "cwemap/errors.hpp"

namespace cwemap {

namespace {

void tally(PrecisionCell& cell, const VulnMapping& mapping, const GroundTruthLabel& label) {
  if (mapping.predicted_cwe && *mapping.predicted_cwe == label.cwe_id) {
    ++cell.same;
  } else {
    ++cell.different;
  }
}

}  // namespace

PrecisionCell precision(const std::vector<VulnMapping>& mappings,
                        const std::map<std::string, GroundTruthLabel>& labels) {
  PrecisionCell cell;
  for (const VulnMapping& mapping : mappings) {
    auto it = labels.find(mapping.vulnerability_id);
    if (it == labels.end()) continue;
    tally(cell, mapping, it->second);
  }
  return cell;
}

std::vector<PrecisionCell> per_repository_precision(
    const std::vector<VulnMapping>& mappings, const std::map<std::string, GroundTruthLabel>& labels,
    const Corpus& corpus) {
  std::map<std::string, Repository> repo_of;
  for (const RawDocument& document : corpus.documents) {
    if (document.kind == DocumentKind::Vulnerability) {
      repo_of.emplace(document.id, document.repository);
    }
  }
  static constexpr Repository kOrder[] = {Repository::Maven, Repository::Pip, Repository::Npm,
                                          Repository::RubyGems};
  std::map<Repository, PrecisionCell> per_repo;
  PrecisionCell all;
  for (const VulnMapping& mapping : mappings) {
    auto label = labels.find(mapping.vulnerability_id);
    if (label == labels.end()) continue;
    auto repo = repo_of.find(mapping.vulnerability_id);
    if (repo == repo_of.end()) {
      throw std::invalid_argument("mapping refers to a vulnerability outside the corpus: " +
                                  mapping.vulnerability_id);
    }
    PrecisionCell& cell = per_repo[repo->second];
    cell.repository = repo->second;
    tally(cell, mapping, label->second);
    tally(all, mapping, label->second);
  }
  std::vector<PrecisionCell> cells;
  for (Repository repo : kOrder) {
    auto it = per_repo.find(repo);
    if (it != per_repo.end()) cells.push_back(it->second);
  }
  cells.push_back(all);
  return cells;
}

DescriptiveStatsRow descriptive_stats(const Corpus& corpus, const Vocabulary& vocab,
                                      const std::vector<DocumentTermCounts>& counts) {
  if (counts.size() != corpus.documents.size()) {
    throw std::invalid_argument("descriptive_stats: counts do not cover the corpus");
  }
  DescriptiveStatsRow row;
  row.k = vocab.k;
  row.unique_kgrams = vocab.m();
  std::uint64_t total = 0, weakness_total = 0, vulnerability_total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += counts[i].length;
    if (corpus.documents[i].kind == DocumentKind::Weakness) {
      weakness_total += counts[i].length;
    } else {
      vulnerability_total += counts[i].length;
    }
  }
  const auto mean = [](std::uint64_t sum, std::size_t n) {
    return n == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(n);
  };
  row.avg_document_length = mean(total, counts.size());
  row.avg_weakness_length = mean(weakness_total, corpus.n1);
  row.avg_vulnerability_length = mean(vulnerability_total, corpus.n2);
  return row;
}

std::vector<std::pair<std::string, double>> similarity_distribution(const MappingMatrix& matrix) {
  std::vector<std::pair<std::string, double>> maxima;
  maxima.reserve(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    double max_value = matrix.cols() == 0 ? 0.0 : matrix.at(r, 0);
    for (std::size_t c = 1; c < matrix.cols(); ++c) {
      max_value = std::max(max_value, matrix.at(r, c));
    }
    maxima.emplace_back(matrix.vulnerability_ids[r], max_value);
  }
  return maxima;
}

DenseMatrix weakness_similarity_grid(const DenseMatrix& doc_similarity, const Corpus& corpus) {
  if (doc_similarity.rows != corpus.documents.size()) {
    throw std::invalid_argument("similarity matrix order does not match the corpus");
  }
  std::vector<std::size_t> weak_idx;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    if (corpus.documents[i].kind == DocumentKind::Weakness) {
      weak_idx.push_back(i);
      labels.push_back(corpus.documents[i].id);
    }
  }
  DenseMatrix grid(weak_idx.size(), weak_idx.size());
  grid.row_labels = labels;
  grid.col_labels = labels;
  for (std::size_t r = 0; r < weak_idx.size(); ++r) {
    for (std::size_t c = 0; c < weak_idx.size(); ++c) {
      grid.at(r, c) = doc_similarity.at(weak_idx[r], weak_idx[c]);
    }
  }
  return grid;
}

}  // namespace cwemap
