#pragma once

#include <nowcast/error.hpp>

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

namespace nowcast {

// A calendar month. Stored as a single ordinal so that month arithmetic and
// ordering are plain integer operations.
class Month {
public:
  constexpr Month() = default;
  constexpr Month(int year, int month) : ordinal_(year * 12 + (month - 1)) {}

  static constexpr Month from_ordinal(int ordinal) {
    Month m;
    m.ordinal_ = ordinal;
    return m;
  }

  constexpr int year() const { return floor_div(ordinal_, 12); }
  constexpr int month() const { return ordinal_ - year() * 12 + 1; }
  constexpr int ordinal() const { return ordinal_; }

  constexpr Month operator+(int months) const { return from_ordinal(ordinal_ + months); }
  constexpr Month operator-(int months) const { return from_ordinal(ordinal_ - months); }
  constexpr int operator-(Month other) const { return ordinal_ - other.ordinal_; }
  constexpr Month& operator++() {
    ++ordinal_;
    return *this;
  }

  constexpr auto operator<=>(const Month&) const = default;

  // "YYYY-MM"
  std::string str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year(), month());
    return buf;
  }

  // Parses "YYYY-MM".
  static Month parse(std::string_view s) {
    int y = 0, m = 0;
    if (s.size() != 7 || s[4] != '-' || !parse_int(s.substr(0, 4), y) ||
        !parse_int(s.substr(5, 2), m) || m < 1 || m > 12)
      throw ParseError("invalid month '" + std::string(s) + "' (expected YYYY-MM)");
    return Month(y, m);
  }

private:
  static constexpr int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

  static bool parse_int(std::string_view s, int& out) {
    for (char c : s)
      if (c < '0' || c > '9') return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  }

  int ordinal_ = 0;
};

// A validated calendar date, parsed from "YYYY-MM-DD".
struct Date {
  std::chrono::year_month_day ymd;

  Month month() const {
    return Month(static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())));
  }

  std::string str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

  static Date parse(std::string_view s) {
    auto bad = [&] { return ParseError("invalid date '" + std::string(s) + "' (expected YYYY-MM-DD)"); };
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw bad();
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
      if (s[i] < '0' || s[i] > '9') throw bad();
    int y = 0;
    unsigned m = 0, d = 0;
    std::from_chars(s.data(), s.data() + 4, y);
    std::from_chars(s.data() + 5, s.data() + 7, m);
    std::from_chars(s.data() + 8, s.data() + 10, d);
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok()) throw bad();
    return Date{ymd};
  }

  friend bool operator==(const Date&, const Date&) = default;
};

// Inclusive range of months.
struct MonthWindow {
  Month first;
  Month last;

  bool contains(Month m) const { return first <= m && m <= last; }
};

} // namespace nowcast
