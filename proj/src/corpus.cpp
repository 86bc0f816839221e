#include "cwemap/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cwemap/csv.hpp"
#include "cwemap/errors.hpp"

namespace cwemap {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t'; }

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Case-insensitive search for an ASCII needle.
std::size_t ifind(const std::string& haystack, const std::string& needle, std::size_t from) {
  if (needle.empty() || haystack.size() < needle.size()) return std::string::npos;
  for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (ascii_lower(haystack[i + j]) != ascii_lower(needle[j])) {
        match = false;
        break;
      }
    }
    if (match) return i;
  }
  return std::string::npos;
}

std::string decode_entities(const std::string& text) {
  static const std::pair<const char*, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool decoded = false;
    if (text[i] == '&') {
      for (const auto& [entity, ch] : kEntities) {
        std::size_t len = std::char_traits<char>::length(entity);
        if (text.compare(i, len, entity) == 0) {
          out += ch;
          i += len;
          decoded = true;
          break;
        }
      }
    }
    if (!decoded) {
      out += text[i];
      ++i;
    }
  }
  return out;
}

std::string drop_tags(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      out += text[i];
      ++i;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      std::size_t end = text.find("-->", i + 4);
      i = (end == std::string::npos) ? text.size() : end + 3;
      out += ' ';
      continue;
    }
    std::size_t j = i + 1;
    if (j < text.size() && text[j] == '/') ++j;
    std::string name;
    while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) {
      name += ascii_lower(text[j]);
      ++j;
    }
    std::size_t gt = text.find('>', i + 1);
    bool is_closing = i + 1 < text.size() && text[i + 1] == '/';
    if (!is_closing && (name == "script" || name == "style")) {
      // Drop the element contents entirely.
      std::size_t close = ifind(text, "</" + name, i + 1);
      if (close == std::string::npos) {
        i = text.size();
      } else {
        std::size_t close_gt = text.find('>', close);
        i = (close_gt == std::string::npos) ? text.size() : close_gt + 1;
      }
      out += ' ';
      continue;
    }
    // Unclosed tag consumes up to the next '>', or the rest of the input.
    i = (gt == std::string::npos) ? text.size() : gt + 1;
    out += ' ';
  }
  return out;
}

std::string collapse_whitespace(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out += ' ';
    in_space = false;
    out += c;
  }
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  for (char c : text) {
    if (c == '\n') {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      line.clear();
    } else {
      line += c;
    }
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  lines.push_back(std::move(line));
  return lines;
}

std::optional<char> first_nonblank(const std::string& line) {
  for (char c : line) {
    if (!is_blank(c)) return c;
  }
  return std::nullopt;
}

std::string trim_copy(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

const std::regex& markdown_link_re() {
  static const std::regex re(R"(\[([^\]]*)\]\(([^)]*)\))");
  return re;
}

const std::regex& bare_url_re() {
  static const std::regex re(R"(https?://[^\s\])>"']+)");
  return re;
}

}  // namespace

std::string kind_name(DocumentKind kind) {
  return kind == DocumentKind::Weakness ? "weakness" : "vulnerability";
}

std::string repository_name(Repository repository) {
  switch (repository) {
    case Repository::Maven: return "maven";
    case Repository::Pip: return "pip";
    case Repository::Npm: return "npm";
    case Repository::RubyGems: return "rubygems";
    case Repository::None: return "none";
  }
  return "none";
}

std::string origin_name(SegmentOrigin origin) {
  switch (origin) {
    case SegmentOrigin::FirstOrder: return "first_order";
    case SegmentOrigin::SecondOrder: return "second_order";
    case SegmentOrigin::WeaknessEntry: return "weakness_entry";
  }
  return "first_order";
}

DocumentKind parse_kind(const std::string& name) {
  if (name == "weakness") return DocumentKind::Weakness;
  if (name == "vulnerability") return DocumentKind::Vulnerability;
  throw UserError("unknown document kind: " + name);
}

Repository parse_repository(const std::string& name) {
  if (name == "maven") return Repository::Maven;
  if (name == "pip") return Repository::Pip;
  if (name == "npm") return Repository::Npm;
  if (name == "rubygems") return Repository::RubyGems;
  if (name == "none") return Repository::None;
  throw UserError("unknown repository: " + name);
}

SegmentOrigin parse_origin(const std::string& name) {
  if (name == "first_order") return SegmentOrigin::FirstOrder;
  if (name == "second_order") return SegmentOrigin::SecondOrder;
  if (name == "weakness_entry") return SegmentOrigin::WeaknessEntry;
  throw UserError("unknown segment origin: " + name);
}

std::string strip_markup(const std::string& raw) {
  // Each pass decodes entities, drops tag spans, and collapses whitespace.
  // Decoding can surface new tags ("&lt;script&gt;"), so iterate until the
  // text stops changing; every changing pass shrinks the text, so this
  // terminates.
  std::string current = raw;
  for (int pass = 0; pass < 100; ++pass) {
    std::string next = collapse_whitespace(drop_tags(decode_entities(current)));
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

std::string extract_first_order(const std::string& report) {
  std::vector<std::string> kept;
  for (const std::string& line : split_lines(report)) {
    std::optional<char> head = first_nonblank(line);
    if (head && (*head == '#' || *head == '-')) continue;
    kept.push_back(std::regex_replace(line, markdown_link_re(), "$1"));
  }
  std::string out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (i > 0) out += '\n';
    out += kept[i];
  }
  return trim_copy(out).empty() ? std::string() : out;
}

std::vector<std::string> extract_links(const std::string& report) {
  std::vector<std::string> urls;
  for (const std::string& line : split_lines(report)) {
    std::optional<char> head = first_nonblank(line);
    if (!head || *head != '-') continue;
    // Markdown link targets first, then bare URLs outside those spans,
    // merged back into line order.
    std::vector<std::pair<std::size_t, std::string>> found;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (auto it = std::sregex_iterator(line.begin(), line.end(), markdown_link_re());
         it != std::sregex_iterator(); ++it) {
      std::string url = trim_copy((*it)[2].str());
      if (!url.empty()) found.emplace_back(it->position(0), url);
      spans.emplace_back(it->position(0), it->position(0) + it->length(0));
    }
    for (auto it = std::sregex_iterator(line.begin(), line.end(), bare_url_re());
         it != std::sregex_iterator(); ++it) {
      std::size_t pos = it->position(0);
      bool inside = std::any_of(spans.begin(), spans.end(), [pos](const auto& span) {
        return pos >= span.first && pos < span.second;
      });
      if (inside) continue;
      std::string url = it->str();
      while (!url.empty() && (url.back() == '.' || url.back() == ',' || url.back() == ';' ||
                              url.back() == ':')) {
        url.pop_back();
      }
      if (!url.empty()) found.emplace_back(pos, url);
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [pos, url] : found) urls.push_back(std::move(url));
  }
  return urls;
}

Corpus load_corpus(const std::filesystem::path& manifest_path,
                   const std::optional<std::set<std::string>>& allowed_weakness_ids) {
  if (!std::filesystem::exists(manifest_path)) {
    throw UserError("corpus manifest does not exist: " + manifest_path.string());
  }
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(csv::read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw UserError("cannot parse corpus manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("documents") || !root["documents"].is_array()) {
    throw UserError("corpus manifest " + manifest_path.string() +
                    " must contain a \"documents\" array");
  }

  const std::filesystem::path base = manifest_path.parent_path();
  Corpus corpus;
  std::set<std::string> seen_ids;
  for (const auto& entry : root["documents"]) {
    RawDocument doc;
    try {
      doc.id = entry.at("id").get<std::string>();
      doc.kind = parse_kind(entry.at("kind").get<std::string>());
      doc.repository = parse_repository(entry.value("repository", "none"));
    } catch (const nlohmann::json::exception& e) {
      throw UserError("malformed document entry in " + manifest_path.string() + ": " + e.what());
    }
    if (doc.id.empty()) {
      throw UserError("document with empty id in " + manifest_path.string());
    }
    if (!seen_ids.insert(doc.id).second) {
      throw UserError("duplicate document id: " + doc.id);
    }
    if (doc.kind == DocumentKind::Weakness) {
      if (doc.repository != Repository::None) {
        throw UserError("weakness document " + doc.id + " must have repository \"none\"");
      }
      if (allowed_weakness_ids && !allowed_weakness_ids->count(doc.id)) {
        throw UserError("weakness id outside the allowed set: " + doc.id);
      }
    } else if (doc.repository == Repository::None) {
      throw UserError("vulnerability document " + doc.id + " must name a repository");
    }
    if (!entry.contains("segments") || !entry["segments"].is_array() ||
        entry["segments"].empty()) {
      throw UserError("document " + doc.id + " has no segments");
    }
    for (const auto& seg : entry["segments"]) {
      TextSegment segment;
      std::string rel;
      try {
        segment.origin = parse_origin(seg.at("origin").get<std::string>());
        rel = seg.at("path").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw UserError("malformed segment entry for " + doc.id + ": " + e.what());
      }
      segment.source_label = seg.value("label", rel);
      std::filesystem::path file = base / rel;
      if (!std::filesystem::exists(file)) {
        throw UserError("segment file does not exist: " + file.string());
      }
      std::string text = csv::read_file(file);
      if (segment.origin == SegmentOrigin::FirstOrder) {
        text = extract_first_order(text);
      }
      segment.content = strip_markup(text);
      doc.segments.push_back(std::move(segment));
    }
    if (doc.kind == DocumentKind::Weakness) {
      ++corpus.n1;
    } else {
      ++corpus.n2;
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace cwemap
