#pragma once

#include <nowcast/detail/io.hpp>
#include <nowcast/error.hpp>
#include <nowcast/month.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nowcast {

// A labelled monthly series (BROKER, DIFFBROKER, DIFFPRELIM, ...). A valid
// series has consecutive months and finite values.
struct SentimentSeries {
  std::string label;
  std::map<Month, double> values;

  bool empty() const { return values.empty(); }
  std::size_t size() const { return values.size(); }
  Month first_month() const { return values.begin()->first; }
  Month last_month() const { return values.rbegin()->first; }

  bool contains(Month m) const { return values.contains(m); }

  double at(Month m) const {
    auto it = values.find(m);
    if (it == values.end()) throw DataError(label + ": no value for " + m.str());
    return it->second;
  }

  std::vector<double> as_vector() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& [m, v] : values) out.push_back(v);
    return out;
  }

  void validate() const {
    std::optional<Month> prev;
    for (const auto& [m, v] : values) {
      if (!std::isfinite(v)) throw DataError(label + ": non-finite value at " + m.str());
      if (prev && m != *prev + 1) throw DataError(label + ": missing month " + (*prev + 1).str());
      prev = m;
    }
  }

  friend bool operator==(const SentimentSeries&, const SentimentSeries&) = default;
};

// CSV `month,value`, values with 10 significant digits, LF endings.
inline std::string series_to_csv(const SentimentSeries& s) {
  std::string out = "month,value\n";
  for (const auto& [m, v] : s.values) out += m.str() + "," + detail::format_g(v, 10) + "\n";
  return out;
}

inline double parse_double(std::string_view field, const std::string& where) {
  std::string tmp(detail::trim(field));
  if (tmp.empty()) throw ParseError(where + ": empty numeric field");
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tmp, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": invalid number '" + tmp + "'");
  }
  if (used != tmp.size() || !std::isfinite(v)) throw ParseError(where + ": invalid number '" + tmp + "'");
  return v;
}

inline SentimentSeries series_from_csv(std::string_view text, std::string label, const std::string& origin) {
  SentimentSeries s{std::move(label), {}};
  auto lines = detail::split_lines(text);
  if (lines.empty() || detail::trim(lines[0]) != "month,value")
    throw ParseError(origin + ":1: expected header 'month,value'");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = origin + ":" + std::to_string(i + 1);
    if (detail::trim(lines[i]).empty()) continue;
    auto fields = detail::split(lines[i], ',');
    if (fields.size() != 2) throw ParseError(where + ": expected 2 fields");
    Month m;
    try {
      m = Month::parse(detail::trim(fields[0]));
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!s.values.emplace(m, parse_double(fields[1], where)).second)
      throw ParseError(where + ": duplicate month " + m.str());
  }
  s.validate();
  return s;
}

inline SentimentSeries load_series_csv(const std::filesystem::path& path, std::string label) {
  if (!std::filesystem::exists(path)) throw IoError("series file not found: '" + path.string() + "'");
  return series_from_csv(detail::read_file(path), std::move(label), path.string());
}

} // namespace nowcast
