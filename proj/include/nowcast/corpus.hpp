#pragma once

// Document archive ingestion: manifest parsing, document loading and
// month bucketing.

#include <nowcast/detail/io.hpp>
#include <nowcast/detail/utf8.hpp>
#include <nowcast/error.hpp>
#include <nowcast/month.hpp>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace nowcast {

struct DocumentEntry {
  std::string id;
  std::string source;
  Date date;
  std::string path;

  friend bool operator==(const DocumentEntry&, const DocumentEntry&) = default;
};

struct Document {
  DocumentEntry entry;
  std::string text;
  // Unicode scalar values in text, whitespace and punctuation included.
  std::size_t char_count = 0;
};

// Ascending by month; months without documents are absent.
using MonthlyBuckets = std::map<Month, std::vector<Document>>;

// Parses one manifest line: a JSON object with exactly the string keys
// id, source, date (YYYY-MM-DD) and path.
inline DocumentEntry parse_manifest_record(std::string_view line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError("record is not a JSON object");

  static const std::set<std::string> keys{"id", "source", "date", "path"};
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) throw ParseError("unknown key '" + key + "'");
    if (!value.is_string()) throw ParseError("key '" + key + "' must be a string");
  }
  for (const auto& key : keys)
    if (!obj.contains(key)) throw ParseError("missing key '" + key + "'");

  DocumentEntry e;
  e.id = obj["id"].get<std::string>();
  e.source = obj["source"].get<std::string>();
  e.date = Date::parse(obj["date"].get<std::string>());
  e.path = obj["path"].get<std::string>();
  if (e.id.empty()) throw ParseError("empty id");
  if (e.path.empty()) throw ParseError("empty path");
  return e;
}

// Parses a whole manifest. Blank lines are skipped; `origin` names the source
// in error messages.
inline std::vector<DocumentEntry> parse_manifest(std::string_view text, const std::string& origin = "manifest") {
  std::vector<DocumentEntry> entries;
  std::set<std::string> seen;
  std::size_t lineno = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    DocumentEntry e;
    try {
      e = parse_manifest_record(line);
    } catch (const ParseError& err) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": " + err.what());
    }
    if (!seen.insert(e.id).second)
      throw DataError(origin + ":" + std::to_string(lineno) + ": duplicate id '" + e.id + "'");
    entries.push_back(std::move(e));
  }
  return entries;
}

inline std::vector<DocumentEntry> load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("manifest not found: '" + path.string() + "'");
  return parse_manifest(detail::read_file(path), path.string());
}

// Builds a Document from already-loaded text; throws ParseError on invalid UTF-8.
inline Document make_document(DocumentEntry entry, std::string text) {
  auto n = detail::count_scalars(text);
  if (!n) throw ParseError("document '" + entry.id + "' is not valid UTF-8");
  return Document{std::move(entry), std::move(text), *n};
}

inline Document read_document(const DocumentEntry& entry, const std::filesystem::path& root) {
  const auto path = root / entry.path;
  if (!std::filesystem::is_regular_file(path))
    throw IoError("document '" + entry.id + "' not found at '" + path.string() + "'");
  try {
    return make_document(entry, detail::read_file(path));
  } catch (const ParseError&) {
    throw ParseError("document '" + entry.id + "' (" + path.string() + ") is not valid UTF-8");
  }
}

// Keeps documents dated inside `window`; every dropped document is reported
// through `warn`.
inline std::vector<Document> filter_window(std::vector<Document> docs, const MonthWindow& window,
                                           const WarningSink& warn = warn_stderr) {
  std::vector<Document> kept;
  kept.reserve(docs.size());
  for (auto& d : docs) {
    if (window.contains(d.entry.date.month())) {
      kept.push_back(std::move(d));
    } else if (warn) {
      warn("dropping document '" + d.entry.id + "' dated " + d.entry.date.str() + " outside window " +
           window.first.str() + ".." + window.last.str());
    }
  }
  return kept;
}

// Within a bucket, documents are ordered by (date, id) so the result does not
// depend on input order.
inline MonthlyBuckets bucket_by_month(std::vector<Document> docs) {
  MonthlyBuckets buckets;
  for (auto& d : docs) buckets[d.entry.date.month()].push_back(std::move(d));
  for (auto& [month, list] : buckets)
    std::sort(list.begin(), list.end(), [](const Document& a, const Document& b) {
      return std::tie(a.entry.date.ymd, a.entry.id) < std::tie(b.entry.date.ymd, b.entry.id);
    });
  return buckets;
}

} // namespace nowcast
