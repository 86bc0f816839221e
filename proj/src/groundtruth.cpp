#include "cwemap/groundtruth.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "cwemap/csv.hpp"
#include "cwemap/errors.hpp"

namespace cwemap {

namespace {

const std::regex& identifier_re() {
  // Two patterns merged into one alternation so a single left-to-right scan
  // yields all non-overlapping matches in document order.
  static const std::regex re(R"((CWE-[0-9]+)|((?:CVE|CAN)-[0-9]{4}-[0-9]{4,}))",
                             std::regex::icase);
  return re;
}

std::string normalize_identifier(const std::string& raw, IdentifierKind kind) {
  std::string out = raw;
  for (std::size_t i = 0; i < 3 && i < out.size(); ++i) {
    out[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[i])));
  }
  if (kind == IdentifierKind::Cve && out.rfind("CAN", 0) == 0) {
    out.replace(0, 3, "CVE");
  }
  return out;
}

std::string concatenate_segments(const RawDocument& document) {
  std::string text;
  for (const TextSegment& segment : document.segments) {
    if (!text.empty()) text += '\n';
    text += segment.content;
  }
  return text;
}

}  // namespace

std::string route_name(LabelRoute route) {
  return route == LabelRoute::DirectCwe ? "direct_cwe" : "via_cve";
}

std::string reason_name(DisqualifyReason reason) {
  switch (reason) {
    case DisqualifyReason::NoMatch: return "no_match";
    case DisqualifyReason::MultipleDistinct: return "multiple_distinct";
    case DisqualifyReason::UnresolvableCve: return "unresolvable_cve";
    case DisqualifyReason::CweNotAllowed: return "cwe_not_allowed";
    case DisqualifyReason::RejectedCve: return "rejected_cve";
  }
  return "no_match";
}

std::vector<IdentifierMatch> scan_identifiers(const std::string& text) {
  std::vector<IdentifierMatch> matches;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), identifier_re());
       it != std::sregex_iterator(); ++it) {
    IdentifierMatch match;
    match.kind = (*it)[1].matched ? IdentifierKind::Cwe : IdentifierKind::Cve;
    match.normalized_id = normalize_identifier(it->str(), match.kind);
    match.offset = static_cast<std::size_t>(it->position(0));
    matches.push_back(std::move(match));
  }
  return matches;
}

std::vector<IdentifierMatch> distinct_identifiers(const std::string& text) {
  std::vector<IdentifierMatch> distinct;
  std::set<std::string> seen;
  for (IdentifierMatch& match : scan_identifiers(text)) {
    if (seen.insert(match.normalized_id).second) {
      distinct.push_back(std::move(match));
    }
  }
  return distinct;
}

NvdMapping load_nvd_mapping(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw UserError("vulnerability mapping file does not exist: " + path.string());
  }
  auto rows = csv::parse(csv::read_file(path));
  if (rows.empty()) {
    throw UserError("vulnerability mapping file is empty: " + path.string());
  }
  const std::vector<std::string> expected_header = {"cve_id", "cwe_id", "status"};
  if (rows.front() != expected_header) {
    throw UserError("mapping file " + path.string() +
                    " line 1: header must be cve_id,cwe_id,status");
  }
  NvdMapping mapping;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = path.string() + " line " + std::to_string(i + 1);
    if (row.size() != 3) {
      throw UserError("mapping file " + where + ": expected 3 fields, got " +
                      std::to_string(row.size()));
    }
    const std::string& cve = row[0];
    const std::string& cwe = row[1];
    const std::string& status = row[2];
    if (cve.rfind("CVE-", 0) != 0) {
      throw UserError("mapping file " + where + ": bad vulnerability id \"" + cve + "\"");
    }
    if (status.find("REJECTED") != std::string::npos) {
      if (mapping.cve_to_cwe.count(cve)) {
        throw UserError("mapping file " + where + ": " + cve +
                        " is both rejected and mapped");
      }
      mapping.rejected.insert(cve);
      continue;
    }
    if (cwe.rfind("CWE-", 0) != 0) {
      throw UserError("mapping file " + where + ": bad weakness id \"" + cwe + "\"");
    }
    if (mapping.rejected.count(cve)) {
      throw UserError("mapping file " + where + ": " + cve + " is both rejected and mapped");
    }
    auto [it, inserted] = mapping.cve_to_cwe.emplace(cve, cwe);
    if (!inserted && it->second != cwe) {
      throw UserError("mapping file " + where + ": conflicting weaknesses for " + cve + " (" +
                      it->second + " vs " + cwe + ")");
    }
  }
  return mapping;
}

AllowedCweSet allowed_cwe_set(const NvdMapping& mapping) {
  if (mapping.cve_to_cwe.empty()) {
    throw UserError("vulnerability mapping contains no usable rows");
  }
  AllowedCweSet allowed;
  for (const auto& [cve, cwe] : mapping.cve_to_cwe) {
    allowed.cwe_ids.insert(cwe);
  }
  return allowed;
}

QualificationResult qualify(const RawDocument& document, const NvdMapping& mapping,
                            const AllowedCweSet& allowed) {
  if (document.kind != DocumentKind::Vulnerability) {
    throw std::invalid_argument("qualify: document " + document.id + " is not a vulnerability");
  }
  QualificationResult result;
  auto distinct = distinct_identifiers(concatenate_segments(document));
  if (distinct.empty()) {
    result.reason = DisqualifyReason::NoMatch;
    return result;
  }
  if (distinct.size() > 1) {
    result.reason = DisqualifyReason::MultipleDistinct;
    return result;
  }
  const IdentifierMatch& match = distinct.front();
  GroundTruthLabel label;
  label.vulnerability_id = document.id;
  if (match.kind == IdentifierKind::Cwe) {
    if (!allowed.contains(match.normalized_id)) {
      result.reason = DisqualifyReason::CweNotAllowed;
      return result;
    }
    label.cwe_id = match.normalized_id;
    label.route = LabelRoute::DirectCwe;
  } else {
    if (mapping.rejected.count(match.normalized_id)) {
      result.reason = DisqualifyReason::RejectedCve;
      return result;
    }
    auto it = mapping.cve_to_cwe.find(match.normalized_id);
    if (it == mapping.cve_to_cwe.end()) {
      result.reason = DisqualifyReason::UnresolvableCve;
      return result;
    }
    if (!allowed.contains(it->second)) {
      result.reason = DisqualifyReason::CweNotAllowed;
      return result;
    }
    label.cwe_id = it->second;
    label.route = LabelRoute::ViaCve;
    label.via_cve = match.normalized_id;
  }
  result.label = std::move(label);
  return result;
}

std::vector<QualificationRecord> qualify_corpus(const Corpus& corpus, const NvdMapping& mapping,
                                                const AllowedCweSet& allowed) {
  std::vector<QualificationRecord> records;
  for (const RawDocument& document : corpus.documents) {
    if (document.kind != DocumentKind::Vulnerability) continue;
    records.push_back({document.id, qualify(document, mapping, allowed)});
  }
  return records;
}

std::map<std::string, GroundTruthLabel> label_map(const std::vector<QualificationRecord>& records) {
  std::map<std::string, GroundTruthLabel> labels;
  for (const QualificationRecord& record : records) {
    if (record.result.label) {
      labels.emplace(record.vulnerability_id, *record.result.label);
    }
  }
  return labels;
}

}  // namespace cwemap
