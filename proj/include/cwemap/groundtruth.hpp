#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cwemap/corpus.hpp"

namespace cwemap {

enum class IdentifierKind { Cwe, Cve };

struct IdentifierMatch {
  IdentifierKind kind = IdentifierKind::Cwe;
  std::string normalized_id;  // "CWE-<digits>" or "CVE-<yyyy>-<digits>"
  std::size_t offset = 0;

  bool operator==(const IdentifierMatch&) const = default;
};

/// A reduced extract of the vulnerability database: one weakness per
/// vulnerability identifier, with withdrawn identifiers kept aside.
struct NvdMapping {
  std::map<std::string, std::string> cve_to_cwe;
  std::set<std::string> rejected;
};

struct AllowedCweSet {
  std::set<std::string> cwe_ids;

  bool contains(const std::string& cwe_id) const { return cwe_ids.count(cwe_id) > 0; }
};

enum class LabelRoute { DirectCwe, ViaCve };

struct GroundTruthLabel {
  std::string vulnerability_id;
  std::string cwe_id;
  LabelRoute route = LabelRoute::DirectCwe;
  std::optional<std::string> via_cve;

  bool operator==(const GroundTruthLabel&) const = default;
};

enum class DisqualifyReason { NoMatch, MultipleDistinct, UnresolvableCve, CweNotAllowed, RejectedCve };

/// Outcome of the uniqueness rule for one vulnerability: either a label or
/// the reason the document stays outside the estimation subset.
struct QualificationResult {
  std::optional<GroundTruthLabel> label;
  std::optional<DisqualifyReason> reason;

  bool qualified() const { return label.has_value(); }
};

struct QualificationRecord {
  std::string vulnerability_id;
  QualificationResult result;
};

std::string route_name(LabelRoute route);
std::string reason_name(DisqualifyReason reason);

/// Finds every weakness/vulnerability identifier in the text, in document
/// order. Prefix matching is case-insensitive and the legacy "CAN-" prefix
/// is normalized to "CVE-".
std::vector<IdentifierMatch> scan_identifiers(const std::string& text);

/// Distinct normalized identifiers, in first-appearance order.
std::vector<IdentifierMatch> distinct_identifiers(const std::string& text);

/// Loads the mapping CSV (`cve_id,cwe_id,status` with a header row). Rows
/// whose status contains "REJECTED" populate the rejected set; all others
/// must agree on a single weakness per vulnerability identifier.
NvdMapping load_nvd_mapping(const std::filesystem::path& path);

/// The distinct weakness ids in the mapping's range.
AllowedCweSet allowed_cwe_set(const NvdMapping& mapping);

/// Applies the uniqueness rule to one vulnerability document: the
/// concatenation of all segments must contain exactly one distinct
/// identifier, and that identifier must resolve to an allowed weakness
/// (a CWE resolves to itself, a CVE through the mapping).
QualificationResult qualify(const RawDocument& document, const NvdMapping& mapping,
                            const AllowedCweSet& allowed);

/// Runs qualify over every vulnerability document, in corpus order.
std::vector<QualificationRecord> qualify_corpus(const Corpus& corpus, const NvdMapping& mapping,
                                                const AllowedCweSet& allowed);

/// Ground-truth labels keyed by vulnerability id.
std::map<std::string, GroundTruthLabel> label_map(const std::vector<QualificationRecord>& records);

}  // namespace cwemap
