#pragma once

// Small demonstration lexicons shipped for tests and walkthroughs. They are
// illustrative only, not a research-grade emotion lexicon.
// data/lexicons/*.txt hold the same terms.

#include <nowcast/emolex.hpp>

#include <array>
#include <string_view>

namespace nowcast::demo {

inline constexpr std::array<std::string_view, 20> excitement_terms{
    "gain",     "gains",     "rally",    "rallied", "upbeat",  "boom",     "optimism",
    "optimistic", "confident", "confidence", "surge", "thrive", "strong", "strength",
    "recovery", "upside",    "exciting", "excited", "buoyant", "robust"};

inline constexpr std::array<std::string_view, 20> anxiety_terms{
    "fear",   "fears",  "anxious",  "anxiety",   "worry",     "worried",  "panic",
    "crisis", "slump",  "decline",  "weak",      "weakness",  "uncertain", "uncertainty",
    "downturn", "threat", "stress", "distress", "turmoil",   "concern"};

// Words that appear in neither lexicon; used as filler by the generator.
inline constexpr std::array<std::string_view, 40> neutral_terms{
    "the",      "market",   "report",  "quarter",  "data",     "index",    "policy",   "rate",
    "rates",    "bank",     "central", "inflation", "outlook", "sector",   "trade",    "output",
    "consumer", "demand",   "supply",  "prices",   "yield",    "bond",     "equity",   "earnings",
    "revenue",  "month",    "year",    "analysts", "expect",   "economy",  "region",   "growth",
    "survey",   "spending", "income",  "housing",  "labour",   "exports",  "of",       "and"};

template <std::size_t N>
Lexicon make_lexicon(std::string name, const std::array<std::string_view, N>& terms) {
  Lexicon lex{std::move(name), {}};
  for (auto t : terms) lex.terms.emplace(t);
  return lex;
}

inline Lexicon excitement_lexicon() { return make_lexicon("excitement", excitement_terms); }
inline Lexicon anxiety_lexicon() { return make_lexicon("anxiety", anxiety_terms); }

} // namespace nowcast::demo
