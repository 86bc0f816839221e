#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cwemap/corpus.hpp"

namespace cwemap {

/// A pinned list of high-frequency function words, one per line in the
/// bundled data file. Every entry is lowercase alphabetic.
class StopWordList {
 public:
  static StopWordList load(const std::filesystem::path& path);
  static StopWordList from_words(std::set<std::string> words);

  bool contains(const std::string& token) const { return words_.count(token) > 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Column layout for one gram order: grams sorted lexicographically, with
/// grams occurring at most twice in the whole corpus pruned away.
struct Vocabulary {
  int k = 1;
  std::vector<std::string> grams;        // sorted; position = column index
  std::vector<std::uint64_t> totals;     // corpus-wide occurrence counts
  std::unordered_map<std::string, std::uint32_t> index;

  std::size_t m() const { return grams.size(); }

  static Vocabulary from_grams(int k, std::vector<std::pair<std::string, std::uint64_t>> counted);
};

/// Sparse per-document term frequencies over one vocabulary.
struct DocumentTermCounts {
  std::size_t doc_index = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;  // (column, frequency), ascending
  std::uint64_t length = 0;                                     // sum of frequencies
};

/// Lowercases letters (ASCII plus the Latin-1 supplement).
std::string normalize(const std::string& text);

/// Splits on every character that is not a letter or digit; empty pieces
/// are dropped. Bytes outside ASCII are treated as word characters.
std::vector<std::string> tokenize(const std::string& text);

/// Keeps tokens that are purely alphabetic, not stop words, and between 3
/// and 20 characters long.
std::vector<std::string> trim(const std::vector<std::string>& tokens, const StopWordList& stops);

/// Sliding windows of `k` stems joined by single spaces. Fewer than `k`
/// stems yield nothing.
std::vector<std::string> kgrams(const std::vector<std::string>& stems, int k);

/// normalize -> tokenize -> trim -> stem for one text segment.
std::vector<std::string> stem_segment(const std::string& content, const StopWordList& stops);

/// Per-segment stem sequences for a document. Gram windows never cross
/// segment boundaries, so this is the unit the counting functions consume.
std::vector<std::vector<std::string>> stem_document(const RawDocument& document,
                                                    const StopWordList& stops);

Vocabulary build_vocabulary(const Corpus& corpus, int k, const StopWordList& stops);

DocumentTermCounts count_terms(const RawDocument& document, const Vocabulary& vocab,
                               const StopWordList& stops);

/// count_terms for every document, with doc_index set to corpus position.
std::vector<DocumentTermCounts> count_corpus(const Corpus& corpus, const Vocabulary& vocab,
                                             const StopWordList& stops);

}  // namespace cwemap
