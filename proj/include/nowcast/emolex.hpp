#pragma once

// Emotion lexicons, tokenization, word counting and the monthly net-emotion
// (BROKER) series.
//
// Tokens are maximal runs of letters, with apostrophes and hyphens kept when
// they sit between two letters ("risk-off", "don't"). Everything else
// separates tokens. Matching is exact on the lowercased token: no stemming,
// no phrases. A term listed in both lexicons counts for both.

#include <nowcast/corpus.hpp>
#include <nowcast/detail/utf8.hpp>
#include <nowcast/series.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace nowcast {

struct Lexicon {
  std::string name;
  std::set<std::string, std::less<>> terms;

  bool contains(std::string_view token) const { return terms.find(token) != terms.end(); }
};

// Lowercases every scalar the tokenizer knows a case mapping for. Invalid
// UTF-8 bytes are passed through unchanged.
inline std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) {
    std::size_t start = pos;
    if (auto cp = detail::decode_utf8(s, pos)) {
      detail::append_utf8(out, detail::to_lower(*cp));
    } else {
      out += s[start];
      pos = start + 1;
    }
  }
  return out;
}

// Lexicon file: one term per line, '#' starts a comment line, blank lines
// ignored, terms trimmed and lowercased.
inline Lexicon parse_lexicon(std::string_view text, std::string name, const std::string& origin = "lexicon") {
  if (!detail::count_scalars(text)) throw ParseError(origin + ": not valid UTF-8");
  Lexicon lex{std::move(name), {}};
  std::size_t lineno = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++lineno;
    std::string_view term = detail::trim(line);
    if (term.empty() || term.front() == '#') continue;
    std::size_t pos = 0;
    while (pos < term.size()) {
      auto cp = detail::decode_utf8(term, pos);
      if (detail::is_space(*cp))
        throw DataError(origin + ":" + std::to_string(lineno) + ": term '" + std::string(term) +
                        "' contains whitespace");
    }
    lex.terms.insert(lowercase(term));
  }
  if (lex.terms.empty()) throw DataError(origin + ": lexicon '" + lex.name + "' is empty");
  return lex;
}

inline Lexicon load_lexicon(const std::filesystem::path& path, std::string name) {
  if (!std::filesystem::exists(path)) throw IoError("lexicon not found: '" + path.string() + "'");
  return parse_lexicon(detail::read_file(path), std::move(name), path.string());
}

// Terms present in both lexicons.
inline std::vector<std::string> lexicon_overlap(const Lexicon& a, const Lexicon& b) {
  std::vector<std::string> out;
  for (const auto& t : a.terms)
    if (b.contains(t)) out.push_back(t);
  return out;
}

inline void check_lexicons(const Lexicon& excite, const Lexicon& anx, const WarningSink& warn = warn_stderr) {
  if (!warn) return;
  for (const auto& t : lexicon_overlap(excite, anx))
    warn("term '" + t + "' is in both '" + excite.name + "' and '" + anx.name + "' and counts for both");
}

// Calls fn(std::string_view token) for each lowercase token of text.
template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn) {
  std::string token;
  std::size_t pos = 0;
  auto flush = [&] {
    if (!token.empty()) {
      fn(std::string_view(token));
      token.clear();
    }
  };
  auto peek_letter = [&](std::size_t at) {
    if (at >= text.size()) return false;
    auto cp = detail::decode_utf8(text, at);
    return cp && detail::is_letter(*cp);
  };
  while (pos < text.size()) {
    std::size_t start = pos;
    auto cp = detail::decode_utf8(text, pos);
    if (!cp) {
      flush();
      pos = start + 1;
      continue;
    }
    if (detail::is_letter(*cp)) {
      detail::append_utf8(token, detail::to_lower(*cp));
    } else if (!token.empty() && (detail::is_apostrophe(*cp) || *cp == '-' || *cp == 0x2010) &&
               peek_letter(pos)) {
      token += detail::is_apostrophe(*cp) ? '\'' : '-';
    } else {
      flush();
    }
  }
  flush();
}

inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for_each_token(text, [&](std::string_view t) { tokens.emplace_back(t); });
  return tokens;
}

struct EmotionCounts {
  std::uint64_t excitement = 0;
  std::uint64_t anxiety = 0;
  std::uint64_t chars = 0;

  EmotionCounts& operator+=(const EmotionCounts& o) {
    excitement += o.excitement;
    anxiety += o.anxiety;
    chars += o.chars;
    return *this;
  }
  friend EmotionCounts operator+(EmotionCounts a, const EmotionCounts& b) { return a += b; }
  friend bool operator==(const EmotionCounts&, const EmotionCounts&) = default;
};

inline EmotionCounts score_text(std::string_view text, std::uint64_t chars, const Lexicon& excite,
                                const Lexicon& anx) {
  EmotionCounts c;
  c.chars = chars;
  for_each_token(text, [&](std::string_view t) {
    c.excitement += excite.contains(t);
    c.anxiety += anx.contains(t);
  });
  return c;
}

inline EmotionCounts score_document(const Document& doc, const Lexicon& excite, const Lexicon& anx) {
  return score_text(doc.text, doc.char_count, excite, anx);
}

// Per-month totals. Throws if the bucket months are not consecutive.
inline std::map<Month, EmotionCounts> monthly_counts(const MonthlyBuckets& buckets, const Lexicon& excite,
                                                     const Lexicon& anx) {
  std::map<Month, EmotionCounts> out;
  std::optional<Month> prev;
  for (const auto& [month, docs] : buckets) {
    if (prev && month != *prev + 1) throw DataError("no documents for month " + (*prev + 1).str());
    prev = month;
    EmotionCounts total;
    for (const auto& d : docs) total += score_document(d, excite, anx);
    out.emplace(month, total);
  }
  return out;
}

// BROKER(m) = (excitement − anxiety) / chars over all documents of month m.
inline SentimentSeries sentiment_from_counts(const std::map<Month, EmotionCounts>& counts) {
  SentimentSeries s{"BROKER", {}};
  for (const auto& [month, c] : counts) {
    if (c.chars == 0) throw DataError("month " + month.str() + " has zero total characters");
    const double net = static_cast<double>(c.excitement) - static_cast<double>(c.anxiety);
    s.values.emplace(month, net / static_cast<double>(c.chars));
  }
  s.validate();
  return s;
}

inline SentimentSeries monthly_sentiment(const MonthlyBuckets& buckets, const Lexicon& excite, const Lexicon& anx) {
  return sentiment_from_counts(monthly_counts(buckets, excite, anx));
}

// First difference; label gets a "DIFF" prefix.
inline SentimentSeries diff_series(const SentimentSeries& s) {
  if (s.size() < 2) throw DataError(s.label + ": need at least 2 months to difference");
  s.validate();
  SentimentSeries d{"DIFF" + s.label, {}};
  auto prev = s.values.begin();
  for (auto it = std::next(prev); it != s.values.end(); ++it, ++prev)
    d.values.emplace(it->first, it->second - prev->second);
  return d;
}

// CSV `month,excitement,anxiety,chars`.
inline std::string counts_to_csv(const std::map<Month, EmotionCounts>& counts) {
  std::string out = "month,excitement,anxiety,chars\n";
  for (const auto& [m, c] : counts)
    out += m.str() + "," + std::to_string(c.excitement) + "," + std::to_string(c.anxiety) + "," +
           std::to_string(c.chars) + "\n";
  return out;
}

} // namespace nowcast
