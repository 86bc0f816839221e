#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cwemap {

enum class DocumentKind { Weakness, Vulnerability };

enum class Repository { Maven, Pip, Npm, RubyGems, None };

/// Where a piece of text came from: the advisory body itself, a cached copy
/// of a page the advisory links to, or a weakness catalog entry.
enum class SegmentOrigin { FirstOrder, SecondOrder, WeaknessEntry };

struct TextSegment {
  SegmentOrigin origin = SegmentOrigin::FirstOrder;
  std::string content;       // markup-free plain text
  std::string source_label;  // originating file or cached URL

  bool operator==(const TextSegment&) const = default;
};

struct RawDocument {
  std::string id;
  DocumentKind kind = DocumentKind::Vulnerability;
  Repository repository = Repository::None;
  std::vector<TextSegment> segments;

  bool operator==(const RawDocument&) const = default;
};

/// An ordered document collection. Ordering is the manifest order and every
/// downstream matrix row index refers back to it.
struct Corpus {
  std::vector<RawDocument> documents;
  std::size_t n1 = 0;  // weakness documents
  std::size_t n2 = 0;  // vulnerability documents

  bool operator==(const Corpus&) const = default;
};

std::string kind_name(DocumentKind kind);
std::string repository_name(Repository repository);
std::string origin_name(SegmentOrigin origin);
DocumentKind parse_kind(const std::string& name);
Repository parse_repository(const std::string& name);
SegmentOrigin parse_origin(const std::string& name);

/// Removes tag spans and script/style element contents, decodes the five
/// basic character entities, and collapses whitespace runs to single
/// spaces. Malformed markup is handled best effort: an unclosed tag
/// consumes up to the next '>' or, failing that, the rest of the input.
/// The result is a fixed point, so applying the function twice changes
/// nothing.
std::string strip_markup(const std::string& raw);

/// Reduces an advisory to its prose: drops lines whose first non-blank
/// character is '#' (headings/comments) or '-' (reference links) and
/// rewrites inline links `[text](url)` to their anchor text.
std::string extract_first_order(const std::string& report);

/// Collects, in document order, every URL found on dash-prefixed reference
/// lines, whether written as a markdown link or bare. Duplicates are kept.
std::vector<std::string> extract_links(const std::string& report);

/// Loads a corpus from a JSON manifest. Document order equals manifest
/// order. Segment files are resolved relative to the manifest directory;
/// first-order segments are run through extract_first_order and every
/// segment through strip_markup. When `allowed_weakness_ids` is given,
/// each weakness document id must be a member.
Corpus load_corpus(const std::filesystem::path& manifest_path,
                   const std::optional<std::set<std::string>>& allowed_weakness_ids =
                       std::nullopt);

}  // namespace cwemap
