#include <nowcast/corpus.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace nowcast;

namespace {

std::string record(const std::string& id, const std::string& date, const std::string& path = "") {
  return R"({"id":")" + id + R"(","source":"Broker A","date":")" + date + R"(","path":")" +
         (path.empty() ? id + ".txt" : path) + "\"}\n";
}

Document doc(const std::string& id, const std::string& date, std::string text = "x") {
  return make_document(DocumentEntry{id, "Broker A", Date::parse(date), id + ".txt"}, std::move(text));
}

} // namespace

TEST(Manifest, ParsesEntriesInFileOrder) {
  const auto entries = parse_manifest(record("c", "2010-06-03") + record("a", "2010-06-28") + record("b", "2010-07-01"));
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].id, "c");
  EXPECT_EQ(entries[1].id, "a");
  EXPECT_EQ(entries[2].id, "b");
  EXPECT_EQ(entries[2].date.month(), Month(2010, 7));
  EXPECT_EQ(entries[0].source, "Broker A");
  EXPECT_EQ(entries[0].path, "c.txt");
}

TEST(Manifest, EmptyFileGivesEmptyList) {
  EXPECT_TRUE(parse_manifest("").empty());
  EXPECT_TRUE(parse_manifest("\n\n").empty());
}

TEST(Manifest, DuplicateIdIsRejectedByName) {
  try {
    parse_manifest(record("a", "2010-06-03") + record("a", "2010-06-04"));
    FAIL() << "expected duplicate-id error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate id 'a'"), std::string::npos) << e.what();
  }
}

TEST(Manifest, MalformedLineReportsLineNumber) {
  const std::string text = record("a", "2010-06-03") + "{not json}\n";
  try {
    parse_manifest(text, "m.jsonl");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("m.jsonl:2:"), std::string::npos) << e.what();
  }
}

TEST(Manifest, RejectsUnknownMissingAndBadValues) {
  EXPECT_THROW(parse_manifest(R"({"id":"a","source":"s","date":"2010-06-03","path":"p","extra":"x"})"), ParseError);
  EXPECT_THROW(parse_manifest(R"({"id":"a","source":"s","date":"2010-06-03"})"), ParseError);
  EXPECT_THROW(parse_manifest(R"({"id":"a","source":"s","date":"2010-02-30","path":"p"})"), ParseError);
  EXPECT_THROW(parse_manifest(R"({"id":"a","source":"s","date":"2010/06/03","path":"p"})"), ParseError);
  EXPECT_THROW(parse_manifest(R"({"id":"a","source":"s","date":"2010-06-03","path":""})"), ParseError);
  EXPECT_THROW(parse_manifest(R"({"id":1,"source":"s","date":"2010-06-03","path":"p"})"), ParseError);
  EXPECT_THROW(parse_manifest(R"(["a"])"), ParseError);
}

TEST(Manifest, MissingFileIsIoError) {
  EXPECT_THROW(load_manifest("/nonexistent/manifest.jsonl"), IoError);
}

TEST(ReadDocument, CountsScalarValues) {
  testutil::TempDir dir;
  testutil::write(dir.path() / "a.txt", "ab cd");
  testutil::write(dir.path() / "e.txt", "");
  testutil::write(dir.path() / "u.txt", "\xC3\xA9!");
  const auto a = read_document({"a", "s", Date::parse("2010-06-01"), "a.txt"}, dir.path());
  const auto e = read_document({"e", "s", Date::parse("2010-06-01"), "e.txt"}, dir.path());
  const auto u = read_document({"u", "s", Date::parse("2010-06-01"), "u.txt"}, dir.path());
  EXPECT_EQ(a.char_count, 5u);
  EXPECT_EQ(e.char_count, 0u);
  EXPECT_EQ(u.char_count, 2u); // 3 bytes, 2 scalar values
  EXPECT_EQ(u.text.size(), 3u);
  // Re-reading gives the same count.
  EXPECT_EQ(read_document({"u", "s", Date::parse("2010-06-01"), "u.txt"}, dir.path()).char_count, 2u);
}

TEST(ReadDocument, Errors) {
  testutil::TempDir dir;
  testutil::write(dir.path() / "bad.txt", "ok \xC3 then \xFF");
  testutil::write(dir.path() / "surrogate.txt", "\xED\xA0\x80");
  testutil::write(dir.path() / "overlong.txt", "\xC0\xAF");
  EXPECT_THROW(read_document({"m", "s", Date::parse("2010-06-01"), "missing.txt"}, dir.path()), IoError);
  EXPECT_THROW(read_document({"b", "s", Date::parse("2010-06-01"), "bad.txt"}, dir.path()), ParseError);
  EXPECT_THROW(read_document({"s", "s", Date::parse("2010-06-01"), "surrogate.txt"}, dir.path()), ParseError);
  EXPECT_THROW(read_document({"o", "s", Date::parse("2010-06-01"), "overlong.txt"}, dir.path()), ParseError);
}

TEST(Bucketing, PartitionsByYearMonth) {
  const auto b = bucket_by_month({doc("a", "2010-06-03"), doc("b", "2010-06-28"), doc("c", "2010-07-01")});
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b.at(Month(2010, 6)).size(), 2u);
  EXPECT_EQ(b.at(Month(2010, 7)).size(), 1u);
  EXPECT_TRUE(bucket_by_month({}).empty());
}

TEST(Bucketing, ThirtySevenConsecutiveMonths) {
  std::vector<Document> docs;
  for (int i = 0; i < 37; ++i) {
    const Month m = Month(2010, 6) + i;
    docs.push_back(doc("d" + std::to_string(i), m.str() + "-15"));
  }
  const auto b = bucket_by_month(docs);
  EXPECT_EQ(b.size(), 37u);
  EXPECT_EQ(b.begin()->first, Month(2010, 6));
  EXPECT_EQ(b.rbegin()->first, Month(2013, 6));
}

TEST(Bucketing, PartitionAndOrderInsensitivityProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Document> docs;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      const Month m = Month(2011, 1) + static_cast<int>(rng() % 8);
      const int day = 1 + static_cast<int>(rng() % 28);
      char date[16];
      std::snprintf(date, sizeof date, "%04d-%02d-%02d", m.year(), m.month(), day);
      docs.push_back(doc("id" + std::to_string(i), date, std::string(rng() % 5, 'z')));
    }
    auto shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = bucket_by_month(docs);
    const auto b = bucket_by_month(shuffled);
    std::size_t total = 0;
    ASSERT_EQ(a.size(), b.size());
    for (const auto& [m, list] : a) {
      total += list.size();
      const auto& other = b.at(m);
      ASSERT_EQ(list.size(), other.size());
      for (std::size_t i = 0; i < list.size(); ++i) {
        EXPECT_EQ(list[i].entry, other[i].entry);
        EXPECT_EQ(list[i].entry.date.month(), m);
      }
    }
    EXPECT_EQ(total, docs.size());
  }
}

TEST(Window, DropsOutOfWindowDocumentsWithWarning) {
  std::vector<std::string> warnings;
  const auto kept = filter_window({doc("a", "2010-05-31"), doc("b", "2010-06-01"), doc("c", "2010-08-01")},
                                  MonthWindow{Month(2010, 6), Month(2010, 7)},
                                  [&](const std::string& w) { warnings.push_back(w); });
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].entry.id, "b");
  ASSERT_EQ(warnings.size(), 2u);
  EXPECT_NE(warnings[0].find("'a'"), std::string::npos);
}

TEST(MonthType, ParseFormatArithmetic) {
  const Month m = Month::parse("2012-05");
  EXPECT_EQ(m.year(), 2012);
  EXPECT_EQ(m.month(), 5);
  EXPECT_EQ((m - 5).str(), "2011-12");
  EXPECT_EQ((m + 8).str(), "2013-01");
  EXPECT_EQ(Month(2013, 7) - Month(2012, 5), 14);
  EXPECT_THROW(Month::parse("2012-13"), ParseError);
  EXPECT_THROW(Month::parse("2012-5"), ParseError);
  EXPECT_THROW(Month::parse("20x2-05"), ParseError);
}
