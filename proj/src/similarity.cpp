#include "cwemap/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>

#include "cwemap/errors.hpp"

namespace cwemap {

namespace {

using SparseRow = std::vector<std::pair<std::uint32_t, double>>;

double sparse_dot(const SparseRow& a, const SparseRow& b) {
  double sum = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia].first < b[ib].first) {
      ++ia;
    } else if (a[ia].first > b[ib].first) {
      ++ib;
    } else {
      sum += a[ia].second * b[ib].second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

// Runs fn(row) for every row index, splitting rows across threads. Each
// entry is computed independently, so the decomposition cannot change
// results.
void for_each_row(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

DenseMatrix pairwise_matrix(std::size_t n, std::vector<std::string> labels, unsigned threads,
                            const std::function<double(std::size_t, std::size_t)>& similarity,
                            const std::vector<bool>& nonzero) {
  DenseMatrix matrix(n, n);
  if (!labels.empty() && labels.size() != n) {
    throw std::invalid_argument("similarity labels do not match the matrix order");
  }
  matrix.row_labels = labels;
  matrix.col_labels = std::move(labels);
  for_each_row(n, threads, [&](std::size_t a) {
    if (!nonzero[a]) return;
    matrix.at(a, a) = 1.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!nonzero[b]) continue;
      double value = similarity(a, b);
      matrix.at(a, b) = value;
      matrix.at(b, a) = value;
    }
  });
  return matrix;
}

}  // namespace

std::string tie_resolution_name(TieResolution resolution) {
  switch (resolution) {
    case TieResolution::None: return "none";
    case TieResolution::GroundTruthPreference: return "ground_truth";
    case TieResolution::LowestCweId: return "lowest_id";
  }
  return "none";
}

DenseMatrix cosine_matrix(const WeightMatrix& weights, std::vector<std::string> labels,
                          unsigned threads) {
  const std::size_t n = weights.rows;
  std::vector<double> norms(n, 0.0);
  std::vector<bool> nonzero(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& [column, value] : weights.row_entries[i]) {
      sum += value * value;
    }
    norms[i] = std::sqrt(sum);
    nonzero[i] = sum > 0.0;
  }
  return pairwise_matrix(
      n, std::move(labels), threads,
      [&](std::size_t a, std::size_t b) {
        double value = sparse_dot(weights.row_entries[a], weights.row_entries[b]) /
                       (norms[a] * norms[b]);
        return std::clamp(value, 0.0, 1.0);
      },
      nonzero);
}

DenseMatrix jaccard_matrix(const WeightMatrix& weights, std::vector<std::string> labels,
                           unsigned threads) {
  const std::size_t n = weights.rows;
  std::vector<bool> nonzero(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    nonzero[i] = !weights.row_entries[i].empty();
  }
  return pairwise_matrix(
      n, std::move(labels), threads,
      [&](std::size_t a, std::size_t b) {
        const auto& ra = weights.row_entries[a];
        const auto& rb = weights.row_entries[b];
        std::size_t ia = 0, ib = 0, common = 0;
        while (ia < ra.size() && ib < rb.size()) {
          if (ra[ia].first < rb[ib].first) {
            ++ia;
          } else if (ra[ia].first > rb[ib].first) {
            ++ib;
          } else {
            ++common;
            ++ia;
            ++ib;
          }
        }
        std::size_t unioned = ra.size() + rb.size() - common;
        return unioned == 0 ? 0.0
                            : static_cast<double>(common) / static_cast<double>(unioned);
      },
      nonzero);
}

MappingMatrix extract_vuln_by_weakness(const DenseMatrix& doc_similarity, const Corpus& corpus) {
  if (doc_similarity.rows != corpus.documents.size() ||
      doc_similarity.cols != corpus.documents.size()) {
    throw std::invalid_argument("similarity matrix order does not match the corpus");
  }
  if (corpus.n1 == 0 || corpus.n2 == 0) {
    throw UserError("corpus must contain both weaknesses and vulnerabilities");
  }
  std::vector<std::size_t> vuln_rows;
  std::vector<std::size_t> weak_cols;
  MappingMatrix mapping;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    if (corpus.documents[i].kind == DocumentKind::Vulnerability) {
      vuln_rows.push_back(i);
      mapping.vulnerability_ids.push_back(corpus.documents[i].id);
    } else {
      weak_cols.push_back(i);
      mapping.weakness_ids.push_back(corpus.documents[i].id);
    }
  }
  mapping.values.reserve(vuln_rows.size() * weak_cols.size());
  for (std::size_t r : vuln_rows) {
    for (std::size_t c : weak_cols) {
      mapping.values.push_back(doc_similarity.at(r, c));
    }
  }
  return mapping;
}

namespace {

// Numeric ordering for "CWE-<digits>" ids, falling back to string order.
bool cwe_id_less(const std::string& a, const std::string& b) {
  auto numeric_part = [](const std::string& id) -> long long {
    if (id.rfind("CWE-", 0) != 0) return -1;
    long long value = 0;
    bool any = false;
    for (std::size_t i = 4; i < id.size(); ++i) {
      if (id[i] < '0' || id[i] > '9') return -1;
      value = value * 10 + (id[i] - '0');
      any = true;
    }
    return any ? value : -1;
  };
  long long na = numeric_part(a);
  long long nb = numeric_part(b);
  if (na >= 0 && nb >= 0 && na != nb) return na < nb;
  return a < b;
}

}  // namespace

std::vector<VulnMapping> map_vulnerabilities(
    const MappingMatrix& matrix, const std::map<std::string, GroundTruthLabel>& labels) {
  std::vector<VulnMapping> result;
  result.reserve(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    VulnMapping mapping;
    mapping.vulnerability_id = matrix.vulnerability_ids[r];
    double max_value = matrix.at(r, 0);
    bool all_zero = true;
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      double value = matrix.at(r, c);
      if (value != 0.0) all_zero = false;
      if (value > max_value) max_value = value;
    }
    if (all_zero) {
      result.push_back(std::move(mapping));
      continue;
    }
    mapping.score = max_value;
    const double tolerance = 1e-12 * std::abs(max_value);
    std::vector<std::size_t> tied_cols;
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      if (matrix.at(r, c) >= max_value - tolerance) tied_cols.push_back(c);
    }
    if (tied_cols.size() == 1) {
      mapping.predicted_cwe = matrix.weakness_ids[tied_cols.front()];
    } else {
      mapping.tied = true;
      auto label = labels.find(mapping.vulnerability_id);
      bool preferred = false;
      if (label != labels.end()) {
        for (std::size_t c : tied_cols) {
          if (matrix.weakness_ids[c] == label->second.cwe_id) {
            mapping.predicted_cwe = matrix.weakness_ids[c];
            mapping.tie_resolved_by = TieResolution::GroundTruthPreference;
            preferred = true;
            break;
          }
        }
      }
      if (!preferred) {
        std::size_t best = tied_cols.front();
        for (std::size_t c : tied_cols) {
          if (cwe_id_less(matrix.weakness_ids[c], matrix.weakness_ids[best])) best = c;
        }
        mapping.predicted_cwe = matrix.weakness_ids[best];
        mapping.tie_resolved_by = TieResolution::LowestCweId;
      }
    }
    result.push_back(std::move(mapping));
  }
  return result;
}

}  // namespace cwemap
