#include "cwemap/weights.hpp"

#include <cmath>

#include "cwemap/errors.hpp"

namespace cwemap {

std::string scheme_name(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::Tf: return "tf";
    case WeightScheme::TfLog: return "tf-log";
    case WeightScheme::TfBool: return "tf-bool";
    case WeightScheme::TfIdf: return "tf-idf";
    case WeightScheme::DlmIdf: return "dlm-idf";
  }
  return "tf";
}

WeightScheme parse_scheme(const std::string& name) {
  if (name == "tf") return WeightScheme::Tf;
  if (name == "tf-log") return WeightScheme::TfLog;
  if (name == "tf-bool") return WeightScheme::TfBool;
  if (name == "tf-idf") return WeightScheme::TfIdf;
  if (name == "dlm-idf") return WeightScheme::DlmIdf;
  throw UserError("unknown weighting scheme: " + name);
}

CorpusStats compute_stats(const std::vector<DocumentTermCounts>& counts, const Vocabulary& vocab,
                          double beta) {
  if (counts.empty()) {
    throw UserError("cannot compute corpus statistics over zero documents");
  }
  if (beta < 0.0 || beta >= 1.0) {
    throw UserError("pivot parameter must lie in [0, 1); got " + std::to_string(beta));
  }
  CorpusStats stats;
  stats.total_documents = counts.size();
  stats.doc_freq.assign(vocab.m(), 0);
  stats.lengths.reserve(counts.size());
  stats.beta = beta;
  std::uint64_t total_length = 0;
  for (const DocumentTermCounts& doc : counts) {
    for (const auto& [column, frequency] : doc.counts) {
      if (frequency > 0) ++stats.doc_freq[column];
    }
    stats.lengths.push_back(doc.length);
    total_length += doc.length;
  }
  stats.avg_length = static_cast<double>(total_length) / static_cast<double>(counts.size());
  return stats;
}

double idf_factor(std::size_t total_documents, std::uint32_t doc_freq) {
  return std::log(static_cast<double>(total_documents + 1) /
                  static_cast<double>(doc_freq + 1)) +
         1.0;
}

WeightMatrix weigh(const std::vector<DocumentTermCounts>& counts, const CorpusStats& stats,
                   WeightScheme scheme, int k) {
  if (counts.size() != stats.total_documents) {
    throw std::invalid_argument("weigh: stats cover a different document count");
  }
  if (scheme == WeightScheme::DlmIdf && stats.avg_length <= 0.0) {
    throw UserError("length normalization needs a positive average document length");
  }
  WeightMatrix matrix;
  matrix.k = k;
  matrix.scheme = scheme;
  matrix.rows = counts.size();
  matrix.cols = stats.doc_freq.size();
  matrix.row_entries.resize(matrix.rows);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    auto& row = matrix.row_entries[i];
    row.reserve(counts[i].counts.size());
    const double length_i = static_cast<double>(stats.lengths[i]);
    for (const auto& [column, frequency] : counts[i].counts) {
      const double f = static_cast<double>(frequency);
      double w = 0.0;
      switch (scheme) {
        case WeightScheme::Tf:
          w = f;
          break;
        case WeightScheme::TfLog:
          w = std::log(f + 1.0);
          break;
        case WeightScheme::TfBool:
          w = f > 0.0 ? 1.0 : 0.0;
          break;
        case WeightScheme::TfIdf:
          w = f * idf_factor(stats.total_documents, stats.doc_freq[column]);
          break;
        case WeightScheme::DlmIdf: {
          const double pivot = (1.0 - stats.beta) + stats.beta * (length_i / stats.avg_length);
          w = ((1.0 + std::log(f + 1.0)) / pivot) *
              idf_factor(stats.total_documents, stats.doc_freq[column]);
          break;
        }
      }
      row.emplace_back(column, w);
    }
  }
  return matrix;
}

}  // namespace cwemap
