#include <nowcast/demo_lexicons.hpp>
#include <nowcast/emolex.hpp>
#include <nowcast/pipeline.hpp>

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace nowcast;

namespace {

Lexicon lex(std::string name, std::initializer_list<const char*> terms) {
  Lexicon l{std::move(name), {}};
  for (auto t : terms) l.terms.emplace(t);
  return l;
}

Document doc(const std::string& id, const std::string& date, std::string text) {
  return make_document(DocumentEntry{id, "Broker A", Date::parse(date), id + ".txt"}, std::move(text));
}

std::string upper_ascii(std::string s) {
  for (char& c : s)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
  return s;
}

// Random text over a small alphabet that exercises letters, separators,
// apostrophes, hyphens and multi-byte characters.
std::string random_text(std::mt19937_64& rng, std::size_t len) {
  static const std::vector<std::string> pieces{"gain", "fear", "a",  "b",      " ",  "-",  "'",
                                               ",",    ".",    "\n", "\xC3\xA9", "\xE2\x80\x94", "rally", "GAIN"};
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

} // namespace

TEST(Lexicon, ParsesTermsSkippingCommentsAndBlanks) {
  const Lexicon l = parse_lexicon("Gain\nrally\n# note\n\nupbeat", "excitement");
  EXPECT_EQ(l.terms, (std::set<std::string, std::less<>>{"gain", "rally", "upbeat"}));
  EXPECT_EQ(l.name, "excitement");
}

TEST(Lexicon, TrimsAndHandlesCrLf) {
  const Lexicon l = parse_lexicon("  Gain \r\nRALLY\r\n", "e");
  EXPECT_TRUE(l.contains("gain"));
  EXPECT_TRUE(l.contains("rally"));
}

TEST(Lexicon, CommentOnlyIsEmptyError) {
  EXPECT_THROW(parse_lexicon("# a\n# b\n", "e"), DataError);
}

TEST(Lexicon, WhitespaceTermIsNamed) {
  try {
    parse_lexicon("gain\nrisk on\n", "anxiety");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'risk on'"), std::string::npos) << e.what();
  }
}

TEST(Lexicon, OverlapIsReportedAsWarning) {
  std::vector<std::string> warnings;
  check_lexicons(lex("excitement", {"gain", "volatile"}), lex("anxiety", {"fear", "volatile"}),
                 [&](const std::string& w) { warnings.push_back(w); });
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("volatile"), std::string::npos);
}

TEST(Lexicon, ShippedDemoFilesMatchEmbeddedLists) {
  const auto e = load_lexicon(NOWCAST_DATA_DIR "/lexicons/excitement_demo.txt", "excitement");
  const auto a = load_lexicon(NOWCAST_DATA_DIR "/lexicons/anxiety_demo.txt", "anxiety");
  EXPECT_EQ(e.terms, demo::excitement_lexicon().terms);
  EXPECT_EQ(a.terms, demo::anxiety_lexicon().terms);
  EXPECT_TRUE(lexicon_overlap(e, a).empty());
  for (auto w : demo::neutral_terms) {
    EXPECT_FALSE(e.contains(w)) << w;
    EXPECT_FALSE(a.contains(w)) << w;
  }
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Markets rallied\xE2\x80\x94strongly!"), (std::vector<std::string>{"markets", "rallied", "strongly"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("risk-off, don't panic"), (std::vector<std::string>{"risk-off", "don't", "panic"}));
}

TEST(Tokenize, EdgeCases) {
  EXPECT_EQ(tokenize("-gain- 'fear' --x"), (std::vector<std::string>{"gain", "fear", "x"}));
  EXPECT_EQ(tokenize("a--b"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(tokenize("rock'n'roll 2012 x2y"), (std::vector<std::string>{"rock'n'roll", "x", "y"}));
  EXPECT_EQ(tokenize("don\xE2\x80\x99t"), (std::vector<std::string>{"don't"}));
  EXPECT_EQ(tokenize("CAF\xC3\x89 caf\xC3\xA9"), (std::vector<std::string>{"caf\xC3\xA9", "caf\xC3\xA9"}));
  EXPECT_EQ(tokenize("ok\xFFgo"), (std::vector<std::string>{"ok", "go"}));
}

TEST(Tokenize, TotalityAndRejoinProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text = random_text(rng, rng() % 60);
    if (trial % 7 == 0) text += static_cast<char>(0x80 + rng() % 0x7F); // stray continuation byte
    const auto tokens = tokenize(text);
    std::string joined;
    for (const auto& t : tokens) joined += t + " ";
    EXPECT_EQ(tokenize(joined), tokens);
    for (const auto& t : tokens) EXPECT_FALSE(t.empty());
  }
}

TEST(Score, Examples) {
  const Lexicon ex = lex("excitement", {"gain"}), an = lex("anxiety", {"fear"});
  EXPECT_EQ(score_document(doc("a", "2010-06-01", "gain gain fear"), ex, an), (EmotionCounts{2, 1, 14}));
  EXPECT_EQ(score_document(doc("b", "2010-06-01", ""), ex, an), (EmotionCounts{0, 0, 0}));
  EXPECT_EQ(score_document(doc("c", "2010-06-01", "nothing he"), ex, an), (EmotionCounts{0, 0, 10}));
}

TEST(Score, TermInBothLexiconsCountsForBoth) {
  const Lexicon ex = lex("excitement", {"volatile"}), an = lex("anxiety", {"volatile"});
  EXPECT_EQ(score_document(doc("a", "2010-06-01", "Volatile."), ex, an), (EmotionCounts{1, 1, 9}));
}

TEST(Score, AdditivityAndCaseInsensitivityProperty) {
  const Lexicon ex = lex("excitement", {"gain", "rally"}), an = lex("anxiety", {"fear"});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string a = random_text(rng, rng() % 30), b = random_text(rng, rng() % 30);
    const auto sa = score_document(doc("a", "2010-06-01", a), ex, an);
    const auto sb = score_document(doc("b", "2010-06-01", b), ex, an);
    // A separator between the two keeps token boundaries intact.
    const auto sab = score_document(doc("ab", "2010-06-01", a + "\n" + b), ex, an);
    EXPECT_EQ(sab.excitement, sa.excitement + sb.excitement);
    EXPECT_EQ(sab.anxiety, sa.anxiety + sb.anxiety);
    EXPECT_EQ(sab.chars, sa.chars + sb.chars + 1);
    const auto su = score_document(doc("u", "2010-06-01", upper_ascii(a)), ex, an);
    EXPECT_EQ(su, sa);
  }
}

TEST(MonthlySentiment, Examples) {
  const Lexicon ex = lex("excitement", {"gain"}), an = lex("anxiety", {"fear"});
  // (2,1,14) + (0,1,6) -> (2-2)/20
  auto b = bucket_by_month({doc("a", "2010-06-01", "gain gain fear"), doc("b", "2010-06-02", "fear x")});
  const auto s = monthly_sentiment(b, ex, an);
  EXPECT_EQ(s.label, "BROKER");
  EXPECT_EQ(s.values.at(Month(2010, 6)), 0.0);

  auto pos = bucket_by_month({doc("a", "2010-06-01", "gain only")});
  EXPECT_GT(monthly_sentiment(pos, ex, an).values.at(Month(2010, 6)), 0.0);

  auto empty = bucket_by_month({doc("a", "2010-06-01", ""), doc("b", "2010-06-09", "")});
  try {
    monthly_sentiment(empty, ex, an);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("2010-06"), std::string::npos);
  }
}

TEST(MonthlySentiment, GapMonthIsError) {
  const Lexicon ex = lex("excitement", {"gain"}), an = lex("anxiety", {"fear"});
  auto b = bucket_by_month({doc("a", "2010-06-01", "gain"), doc("b", "2010-08-01", "fear")});
  EXPECT_THROW(monthly_sentiment(b, ex, an), DataError);
}

TEST(MonthlySentiment, DuplicatingDocumentsLeavesValueUnchanged) {
  const Lexicon ex = demo::excitement_lexicon(), an = demo::anxiety_lexicon();
  std::mt19937_64 rng(3);
  std::vector<Document> docs, doubled;
  for (int i = 0; i < 12; ++i) {
    std::string text;
    for (int w = 0; w < 40; ++w) {
      const auto r = rng() % 10;
      text += std::string(r < 2 ? demo::excitement_terms[rng() % 20] : r < 4 ? demo::anxiety_terms[rng() % 20]
                                                                             : demo::neutral_terms[rng() % 40]) + " ";
    }
    const std::string date = (Month(2011, 1) + i / 3).str() + "-1" + std::to_string(i % 3);
    docs.push_back(doc("d" + std::to_string(i), date, text));
    doubled.push_back(doc("d" + std::to_string(i), date, text));
    doubled.push_back(doc("e" + std::to_string(i), date, text));
  }
  const auto a = monthly_sentiment(bucket_by_month(docs), ex, an);
  const auto b = monthly_sentiment(bucket_by_month(doubled), ex, an);
  EXPECT_EQ(a, b);
}

TEST(DiffSeries, Examples) {
  SentimentSeries s{"BROKER", {{Month(2010, 6), 0.1}, {Month(2010, 7), 0.3}}};
  const auto d = diff_series(s);
  EXPECT_EQ(d.label, "DIFFBROKER");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(d.values.at(Month(2010, 7)), 0.2, 1e-15);

  SentimentSeries c{"BROKER", {}};
  for (int i = 0; i < 10; ++i) c.values.emplace(Month(2010, 6) + i, 0.25);
  for (const auto& [m, v] : diff_series(c).values) EXPECT_EQ(v, 0.0);

  SentimentSeries one{"BROKER", {{Month(2010, 6), 0.1}}};
  EXPECT_THROW(diff_series(one), DataError);
}

TEST(DiffSeries, ThirtySevenMonthsGiveThirtySixAndTelescope) {
  std::mt19937_64 rng(9);
  SentimentSeries s{"BROKER", {}};
  for (int i = 0; i < 37; ++i) s.values.emplace(Month(2010, 6) + i, std::ldexp(static_cast<double>(rng() % 1000), -10));
  const auto d = diff_series(s);
  EXPECT_EQ(d.size(), 36u);
  EXPECT_EQ(d.first_month(), Month(2010, 7));
  EXPECT_EQ(d.last_month(), Month(2013, 6));
  double sum = 0;
  for (const auto& [m, v] : d.values) sum += v;
  // Dyadic values make every partial sum exact.
  EXPECT_EQ(sum, s.values.rbegin()->second - s.values.begin()->second);
}

TEST(DemoCorpus, HandCountedValues) {
  const auto docs = read_corpus(NOWCAST_DATA_DIR "/demo/manifest.jsonl", NOWCAST_DATA_DIR "/demo");
  const auto r = score_documents(docs, demo::excitement_lexicon(), demo::anxiety_lexicon());
  ASSERT_EQ(r.counts.size(), 3u);
  EXPECT_EQ(r.counts.at(Month(2012, 4)), (EmotionCounts{7, 2, 130}));
  EXPECT_EQ(r.counts.at(Month(2012, 5)), (EmotionCounts{0, 6, 139}));
  EXPECT_EQ(r.counts.at(Month(2012, 6)), (EmotionCounts{4, 2, 132}));
  EXPECT_NEAR(r.broker.values.at(Month(2012, 4)), 5.0 / 130.0, 1e-12);
  EXPECT_NEAR(r.broker.values.at(Month(2012, 5)), -6.0 / 139.0, 1e-12);
  EXPECT_NEAR(r.broker.values.at(Month(2012, 6)), 2.0 / 132.0, 1e-12);
  EXPECT_EQ(r.diffbroker.size(), 2u);
}

TEST(SeriesCsv, FormatAndParse) {
  SentimentSeries s{"BROKER", {{Month(2012, 4), 5.0 / 130.0}, {Month(2012, 5), -6.0 / 139.0}}};
  const std::string csv = series_to_csv(s);
  EXPECT_EQ(csv, "month,value\n2012-04,0.03846153846\n2012-05,-0.04316546763\n");
  const auto back = series_from_csv(csv, "BROKER", "x");
  EXPECT_NEAR(back.values.at(Month(2012, 4)), 5.0 / 130.0, 1e-11);
  EXPECT_THROW(series_from_csv("month,value\n2012-04,1\n2012-06,2\n", "s", "x"), DataError);
  EXPECT_THROW(series_from_csv("month,val\n", "s", "x"), ParseError);
  EXPECT_THROW(series_from_csv("month,value\n2012-04,abc\n", "s", "x"), ParseError);
}
