#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <regex>
#include <set>
#include <stdexcept>

#include "cwemap/porter.hpp"

namespace oracle {

std::vector<std::string> stem_tokens(const std::string& content,
                                     const cwemap::StopWordList& stops) {
  std::string lower = content;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
  });
  static const std::regex token_re("[a-z0-9\\x80-\\xff]+");
  static const std::regex alpha_re("[a-z]+");
  std::vector<std::string> stems;
  for (auto it = std::sregex_iterator(lower.begin(), lower.end(), token_re);
       it != std::sregex_iterator(); ++it) {
    std::string token = it->str();
    if (token.size() < 3 || token.size() > 20) continue;
    if (!std::regex_match(token, alpha_re)) continue;
    if (stops.contains(token)) continue;
    stems.push_back(cwemap::porter_stem(token));
  }
  return stems;
}

std::vector<std::string> document_grams(const cwemap::RawDocument& document, int k,
                                        const cwemap::StopWordList& stops) {
  std::vector<std::string> grams;
  for (const cwemap::TextSegment& segment : document.segments) {
    std::vector<std::string> stems = stem_tokens(segment.content, stops);
    for (std::size_t i = 0; i + k <= stems.size(); ++i) {
      std::string gram;
      for (int j = 0; j < k; ++j) {
        if (j > 0) gram += ' ';
        gram += stems[i + j];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

std::vector<std::string> vocabulary(const cwemap::Corpus& corpus, int k,
                                    const cwemap::StopWordList& stops) {
  std::map<std::string, long> totals;
  for (const cwemap::RawDocument& document : corpus.documents) {
    for (const std::string& gram : document_grams(document, k, stops)) {
      ++totals[gram];
    }
  }
  std::vector<std::string> vocab;
  for (const auto& [gram, total] : totals) {
    if (total > 2) vocab.push_back(gram);
  }
  return vocab;  // std::map iteration is already sorted
}

std::vector<std::vector<long>> count_matrix(const cwemap::Corpus& corpus,
                                            const std::vector<std::string>& vocab, int k,
                                            const cwemap::StopWordList& stops) {
  std::map<std::string, std::size_t> column;
  for (std::size_t j = 0; j < vocab.size(); ++j) column[vocab[j]] = j;
  std::vector<std::vector<long>> counts(corpus.documents.size(),
                                        std::vector<long>(vocab.size(), 0));
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    for (const std::string& gram : document_grams(corpus.documents[i], k, stops)) {
      auto it = column.find(gram);
      if (it != column.end()) ++counts[i][it->second];
    }
  }
  return counts;
}

std::vector<std::vector<double>> weight_matrix(const std::vector<std::vector<long>>& counts,
                                               cwemap::WeightScheme scheme, double beta) {
  const std::size_t n = counts.size();
  const std::size_t m = n == 0 ? 0 : counts[0].size();
  std::vector<long> doc_freq(m, 0);
  std::vector<double> lengths(n, 0.0);
  double total_length = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (counts[i][j] > 0) ++doc_freq[j];
      lengths[i] += static_cast<double>(counts[i][j]);
    }
    total_length += lengths[i];
  }
  const double avg_length = n == 0 ? 0.0 : total_length / static_cast<double>(n);

  std::vector<std::vector<double>> weights(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double f = static_cast<double>(counts[i][j]);
      if (f == 0.0) continue;
      const double omega =
          std::log((static_cast<double>(n) + 1.0) / (static_cast<double>(doc_freq[j]) + 1.0)) +
          1.0;
      switch (scheme) {
        case cwemap::WeightScheme::Tf:
          weights[i][j] = f;
          break;
        case cwemap::WeightScheme::TfLog:
          weights[i][j] = std::log(f + 1.0);
          break;
        case cwemap::WeightScheme::TfBool:
          weights[i][j] = 1.0;
          break;
        case cwemap::WeightScheme::TfIdf:
          weights[i][j] = f * omega;
          break;
        case cwemap::WeightScheme::DlmIdf:
          weights[i][j] = ((1.0 + std::log(f + 1.0)) /
                           ((1.0 - beta) + beta * (lengths[i] / avg_length))) *
                          omega;
          break;
      }
    }
  }
  return weights;
}

std::vector<std::vector<double>> cosine(const std::vector<std::vector<double>>& weights) {
  const std::size_t n = weights.size();
  std::vector<double> norms(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double v : weights[i]) sum += v * v;
    norms[i] = std::sqrt(sum);
  }
  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    if (norms[a] == 0.0) continue;
    sim[a][a] = 1.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (norms[b] == 0.0) continue;
      double dot = 0.0;
      for (std::size_t j = 0; j < weights[a].size(); ++j) dot += weights[a][j] * weights[b][j];
      double value = dot / (norms[a] * norms[b]);
      value = std::min(1.0, std::max(0.0, value));
      sim[a][b] = value;
      sim[b][a] = value;
    }
  }
  return sim;
}

std::vector<std::vector<double>> jaccard(const std::vector<std::vector<double>>& weights) {
  const std::size_t n = weights.size();
  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t size_a = 0;
    for (double v : weights[a]) size_a += v != 0.0;
    if (size_a == 0) continue;
    sim[a][a] = 1.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      std::size_t size_b = 0, common = 0;
      for (std::size_t j = 0; j < weights[b].size(); ++j) {
        const bool in_b = weights[b][j] != 0.0;
        size_b += in_b;
        common += in_b && weights[a][j] != 0.0;
      }
      if (size_b == 0) continue;
      double value = static_cast<double>(common) / static_cast<double>(size_a + size_b - common);
      sim[a][b] = value;
      sim[b][a] = value;
    }
  }
  return sim;
}

JacobiEig jacobi_eig(std::vector<std::vector<double>> matrix) {
  const std::size_t n = matrix.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(matrix[i][j]));
  }
  const double tiny = scale * 1e-15;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(matrix[p][q]));
    }
    if (off <= tiny) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = matrix[p][q];
        if (std::abs(apq) <= tiny) continue;
        const double theta = (matrix[q][q] - matrix[p][p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = matrix[i][p];
          const double aiq = matrix[i][q];
          matrix[i][p] = c * aip - s * aiq;
          matrix[i][q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = matrix[p][i];
          const double aqi = matrix[q][i];
          matrix[p][i] = c * api - s * aqi;
          matrix[q][i] = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v[i][p];
          const double viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(matrix[a][a]) > std::abs(matrix[b][b]);
  });

  JacobiEig eig;
  eig.values.resize(n);
  eig.vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t out = 0; out < n; ++out) {
    eig.values[out] = matrix[order[out]][order[out]];
    for (std::size_t i = 0; i < n; ++i) eig.vectors[out][i] = v[i][order[out]];
  }
  return eig;
}

std::vector<std::vector<double>> lsa_reduce(const std::vector<std::vector<double>>& symmetric,
                                            double threshold) {
  const std::size_t n = symmetric.size();
  JacobiEig eig = jacobi_eig(symmetric);
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t p = 0; p < n; ++p) {
    // Thresholding applies to singular values, i.e. eigenvalue magnitudes.
    if (std::abs(eig.values[p]) <= threshold) continue;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out[i][j] += eig.values[p] * eig.vectors[p][i] * eig.vectors[p][j];
      }
    }
  }
  return out;
}

std::vector<double> power_iteration_singular_values(std::vector<std::vector<double>> matrix,
                                                    unsigned seed) {
  const std::size_t n = matrix.size();
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(matrix[i][j]));
  }
  if (scale == 0.0) return std::vector<double>(n, 0.0);

  std::vector<double> values;
  values.reserve(n);
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<double> v(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = gauss(rng);
      norm += v[i] * v[i];
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;

    double lambda = 0.0;
    std::vector<double> w(n, 0.0);
    for (int iter = 0; iter < 200000; ++iter) {
      for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += matrix[i][j] * v[j];
        w[i] = sum;
      }
      lambda = 0.0;
      for (std::size_t i = 0; i < n; ++i) lambda += v[i] * w[i];
      double wnorm = 0.0;
      for (double x : w) wnorm += x * x;
      wnorm = std::sqrt(wnorm);
      if (wnorm <= scale * 1e-14) {
        lambda = 0.0;
        break;
      }
      double residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = w[i] - lambda * v[i];
        residual += r * r;
      }
      for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wnorm;
      if (std::sqrt(residual) <= scale * 1e-11) break;
    }
    values.push_back(std::abs(lambda));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        matrix[i][j] -= lambda * v[i] * v[j];
      }
    }
  }
  std::sort(values.begin(), values.end(), std::greater<double>());
  return values;
}

namespace {

long long cwe_number(const std::string& id) {
  if (id.rfind("CWE-", 0) != 0) return -1;
  try {
    return std::stoll(id.substr(4));
  } catch (const std::exception&) {
    return -1;
  }
}

}  // namespace

std::vector<NaiveMapping> map_rows(const std::vector<std::vector<double>>& block,
                                   const std::vector<std::string>& vulnerability_ids,
                                   const std::vector<std::string>& weakness_ids,
                                   const std::map<std::string, std::string>& ground_truth) {
  std::vector<NaiveMapping> mappings;
  for (std::size_t r = 0; r < block.size(); ++r) {
    NaiveMapping mapping;
    mapping.vulnerability_id = vulnerability_ids[r];
    bool all_zero = true;
    double max_value = block[r][0];
    for (double v : block[r]) {
      if (v != 0.0) all_zero = false;
      max_value = std::max(max_value, v);
    }
    if (all_zero) {
      mappings.push_back(std::move(mapping));
      continue;
    }
    mapping.score = max_value;
    std::vector<std::size_t> tied;
    for (std::size_t c = 0; c < block[r].size(); ++c) {
      if (block[r][c] >= max_value - 1e-12 * std::abs(max_value)) tied.push_back(c);
    }
    if (tied.size() == 1) {
      mapping.predicted_cwe = weakness_ids[tied[0]];
    } else {
      auto gt = ground_truth.find(mapping.vulnerability_id);
      bool matched = false;
      if (gt != ground_truth.end()) {
        for (std::size_t c : tied) {
          if (weakness_ids[c] == gt->second) {
            mapping.predicted_cwe = weakness_ids[c];
            matched = true;
            break;
          }
        }
      }
      if (!matched) {
        std::size_t best = tied[0];
        for (std::size_t c : tied) {
          const long long nc = cwe_number(weakness_ids[c]);
          const long long nb = cwe_number(weakness_ids[best]);
          if (nc >= 0 && nb >= 0 ? nc < nb : weakness_ids[c] < weakness_ids[best]) best = c;
        }
        mapping.predicted_cwe = weakness_ids[best];
      }
    }
    mappings.push_back(std::move(mapping));
  }
  return mappings;
}

std::map<std::string, NaiveCounts> precision_counts(
    const std::vector<NaiveMapping>& mappings,
    const std::map<std::string, std::string>& ground_truth,
    const std::map<std::string, std::string>& repository_of) {
  std::map<std::string, NaiveCounts> counts;
  for (const NaiveMapping& mapping : mappings) {
    auto gt = ground_truth.find(mapping.vulnerability_id);
    if (gt == ground_truth.end()) continue;
    const bool same = mapping.predicted_cwe == gt->second;
    NaiveCounts& repo = counts[repository_of.at(mapping.vulnerability_id)];
    NaiveCounts& all = counts["all"];
    if (same) {
      ++repo.same;
      ++all.same;
    } else {
      ++repo.different;
      ++all.different;
    }
  }
  return counts;
}

}  // namespace oracle
