#include "cwemap/preprocess.hpp"

#include <algorithm>
#include <map>

#include "cwemap/csv.hpp"
#include "cwemap/errors.hpp"
#include "cwemap/porter.hpp"

namespace cwemap {

namespace {

bool ascii_lower_alpha(char c) { return c >= 'a' && c <= 'z'; }

bool word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

StopWordList StopWordList::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw UserError("stop word list does not exist: " + path.string());
  }
  StopWordList list;
  std::string text = csv::read_file(path);
  std::string word;
  std::size_t line_no = 1;
  auto flush = [&] {
    if (!word.empty()) {
      if (!std::all_of(word.begin(), word.end(), ascii_lower_alpha)) {
        throw UserError("stop word list " + path.string() + " line " + std::to_string(line_no) +
                        ": entry \"" + word + "\" is not lowercase alphabetic");
      }
      list.words_.insert(word);
      word.clear();
    }
  };
  for (char c : text) {
    if (c == '\n') {
      flush();
      ++line_no;
    } else if (c != '\r' && c != ' ' && c != '\t') {
      word += c;
    }
  }
  flush();
  if (list.words_.empty()) {
    throw UserError("stop word list is empty: " + path.string());
  }
  return list;
}

StopWordList StopWordList::from_words(std::set<std::string> words) {
  StopWordList list;
  list.words_.insert(words.begin(), words.end());
  return list;
}

Vocabulary Vocabulary::from_grams(int k,
                                  std::vector<std::pair<std::string, std::uint64_t>> counted) {
  std::sort(counted.begin(), counted.end());
  Vocabulary vocab;
  vocab.k = k;
  vocab.grams.reserve(counted.size());
  vocab.totals.reserve(counted.size());
  for (auto& [gram, total] : counted) {
    vocab.index.emplace(gram, static_cast<std::uint32_t>(vocab.grams.size()));
    vocab.grams.push_back(std::move(gram));
    vocab.totals.push_back(total);
  }
  return vocab;
}

std::string normalize(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c >= 'A' && c <= 'Z') {
      out += static_cast<char>(c - 'A' + 'a');
      continue;
    }
    // Latin-1 supplement uppercase letters: two-byte sequences C3 80..C3 9E
    // excluding the multiplication sign C3 97.
    if (c == 0xC3 && i + 1 < text.size()) {
      unsigned char next = static_cast<unsigned char>(text[i + 1]);
      if (next >= 0x80 && next <= 0x9E && next != 0x97) {
        out += static_cast<char>(0xC3);
        out += static_cast<char>(next + 0x20);
        ++i;
        continue;
      }
    }
    out += static_cast<char>(c);
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (word_char(static_cast<unsigned char>(c))) {
      current += c;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> trim(const std::vector<std::string>& tokens, const StopWordList& stops) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const std::string& token : tokens) {
    if (token.size() < 3 || token.size() > 20) continue;
    if (!std::all_of(token.begin(), token.end(), ascii_lower_alpha)) continue;
    if (stops.contains(token)) continue;
    kept.push_back(token);
  }
  return kept;
}

std::vector<std::string> kgrams(const std::vector<std::string>& stems, int k) {
  std::vector<std::string> grams;
  if (k < 1 || stems.size() < static_cast<std::size_t>(k)) return grams;
  grams.reserve(stems.size() - static_cast<std::size_t>(k) + 1);
  for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= stems.size(); ++i) {
    std::string gram = stems[i];
    for (std::size_t j = 1; j < static_cast<std::size_t>(k); ++j) {
      gram += ' ';
      gram += stems[i + j];
    }
    grams.push_back(std::move(gram));
  }
  return grams;
}

std::vector<std::string> stem_segment(const std::string& content, const StopWordList& stops) {
  std::vector<std::string> stems = trim(tokenize(normalize(content)), stops);
  for (std::string& stem : stems) {
    stem = porter_stem(stem);
  }
  return stems;
}

std::vector<std::vector<std::string>> stem_document(const RawDocument& document,
                                                    const StopWordList& stops) {
  std::vector<std::vector<std::string>> per_segment;
  per_segment.reserve(document.segments.size());
  for (const TextSegment& segment : document.segments) {
    per_segment.push_back(stem_segment(segment.content, stops));
  }
  return per_segment;
}

Vocabulary build_vocabulary(const Corpus& corpus, int k, const StopWordList& stops) {
  if (k < 1 || k > 3) {
    throw UserError("gram order must be 1, 2, or 3; got " + std::to_string(k));
  }
  // std::map keeps grams sorted, which fixes the column order.
  std::map<std::string, std::uint64_t> counted;
  for (const RawDocument& document : corpus.documents) {
    for (const auto& stems : stem_document(document, stops)) {
      for (std::string& gram : kgrams(stems, k)) {
        ++counted[std::move(gram)];
      }
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [gram, total] : counted) {
    if (total > 2) kept.emplace_back(gram, total);
  }
  if (kept.empty()) {
    throw UserError("vocabulary is empty after pruning for k=" + std::to_string(k) +
                    "; the corpus is too small for this gram order");
  }
  return Vocabulary::from_grams(k, std::move(kept));
}

DocumentTermCounts count_terms(const RawDocument& document, const Vocabulary& vocab,
                               const StopWordList& stops) {
  std::map<std::uint32_t, std::uint32_t> sparse;
  for (const auto& stems : stem_document(document, stops)) {
    for (const std::string& gram : kgrams(stems, vocab.k)) {
      auto it = vocab.index.find(gram);
      if (it != vocab.index.end()) {
        ++sparse[it->second];
      }
    }
  }
  DocumentTermCounts counts;
  counts.counts.reserve(sparse.size());
  for (const auto& [column, frequency] : sparse) {
    counts.counts.emplace_back(column, frequency);
    counts.length += frequency;
  }
  return counts;
}

std::vector<DocumentTermCounts> count_corpus(const Corpus& corpus, const Vocabulary& vocab,
                                             const StopWordList& stops) {
  std::vector<DocumentTermCounts> all;
  all.reserve(corpus.documents.size());
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    DocumentTermCounts counts = count_terms(corpus.documents[i], vocab, stops);
    counts.doc_index = i;
    all.push_back(std::move(counts));
  }
  return all;
}

}  // namespace cwemap
