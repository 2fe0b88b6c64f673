#pragma once

// Forecast targets from the index table, ex-ante alignment of predictor and
// target, and the autocorrelation check used before regressing one on the
// other.

#include <nowcast/detail/io.hpp>
#include <nowcast/series.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nowcast {

struct IndexRecord {
  double preliminary = 0;
  double final_value = 0;
  std::optional<double> consensus;

  friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

// Monthly preliminary/final index values plus an optional consensus forecast
// of the preliminary value. Months must be consecutive.
struct IndexTable {
  std::map<Month, IndexRecord> rows;

  bool empty() const { return rows.empty(); }
  std::size_t size() const { return rows.size(); }
  Month first_month() const { return rows.begin()->first; }
  Month last_month() const { return rows.rbegin()->first; }

  void validate() const {
    std::optional<Month> prev;
    for (const auto& [m, r] : rows) {
      if (!std::isfinite(r.preliminary) || !std::isfinite(r.final_value) ||
          (r.consensus && !std::isfinite(*r.consensus)))
        throw DataError("index table: non-finite value at " + m.str());
      if (prev && m != *prev + 1) throw DataError("index table: missing month " + (*prev + 1).str());
      prev = m;
    }
  }

  friend bool operator==(const IndexTable&, const IndexTable&) = default;
};

// CSV `month,preliminary,final,consensus`; consensus may be empty.
inline IndexTable index_table_from_csv(std::string_view text, const std::string& origin = "index table") {
  IndexTable t;
  auto lines = detail::split_lines(text);
  if (lines.empty() || detail::trim(lines[0]) != "month,preliminary,final,consensus")
    throw ParseError(origin + ":1: expected header 'month,preliminary,final,consensus'");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = origin + ":" + std::to_string(i + 1);
    if (detail::trim(lines[i]).empty()) continue;
    auto f = detail::split(lines[i], ',');
    if (f.size() != 4) throw ParseError(where + ": expected 4 fields");
    Month m;
    try {
      m = Month::parse(detail::trim(f[0]));
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    IndexRecord r;
    r.preliminary = parse_double(f[1], where);
    r.final_value = parse_double(f[2], where);
    if (!detail::trim(f[3]).empty()) r.consensus = parse_double(f[3], where);
    if (!t.rows.emplace(m, r).second) throw ParseError(where + ": duplicate month " + m.str());
  }
  t.validate();
  return t;
}

inline IndexTable load_index_table(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("index table not found: '" + path.string() + "'");
  return index_table_from_csv(detail::read_file(path), path.string());
}

inline std::string index_table_to_csv(const IndexTable& t) {
  std::string out = "month,preliminary,final,consensus\n";
  for (const auto& [m, r] : t.rows) {
    out += m.str() + "," + detail::format_g(r.preliminary, 10) + "," + detail::format_g(r.final_value, 10) + ",";
    if (r.consensus) out += detail::format_g(*r.consensus, 10);
    out += "\n";
  }
  return out;
}

// value(t) = preliminary(t) − final(t − horizon). Horizon 1 is DIFFPRELIM.
inline SentimentSeries build_target(const IndexTable& table, int horizon) {
  if (horizon < 1) throw DataError("horizon must be >= 1");
  table.validate();
  if (table.size() < static_cast<std::size_t>(horizon) + 1)
    throw DataError("index table has " + std::to_string(table.size()) + " months; horizon " +
                    std::to_string(horizon) + " needs at least " + std::to_string(horizon + 1));
  SentimentSeries s{horizon == 1 ? "DIFFPRELIM" : "DIFFPRELIM_H" + std::to_string(horizon), {}};
  for (const auto& [m, r] : table.rows) {
    auto base = table.rows.find(m - horizon);
    if (base != table.rows.end()) s.values.emplace(m, r.preliminary - base->second.final_value);
  }
  return s;
}

// value(t) = consensus(t) − final(t − 1), for every month of `window` (or of
// the whole table after its first month when no window is given).
inline SentimentSeries build_consensus_diff(const IndexTable& table, std::optional<MonthWindow> window = std::nullopt) {
  table.validate();
  if (table.size() < 2) throw DataError("index table needs at least 2 months for DIFFCONSENSUS");
  const MonthWindow w = window.value_or(MonthWindow{table.first_month() + 1, table.last_month()});
  SentimentSeries s{"DIFFCONSENSUS", {}};
  for (Month m = w.first; m <= w.last; ++m) {
    auto cur = table.rows.find(m);
    auto prev = table.rows.find(m - 1);
    if (cur == table.rows.end() || prev == table.rows.end())
      throw DataError("index table does not cover " + m.str() + " and its previous month");
    if (!cur->second.consensus) throw DataError("missing consensus for " + m.str());
    s.values.emplace(m, *cur->second.consensus - prev->second.final_value);
  }
  return s;
}

struct AlignedRow {
  Month target_month;
  double y = 0;
  double x = 0;

  friend bool operator==(const AlignedRow&, const AlignedRow&) = default;
};

// Rows pair y(t) with x = predictor(t − horizon), chronologically.
struct AlignedDataset {
  std::vector<AlignedRow> rows;
  int horizon = 1;
  std::string predictor_label;
  std::string target_label;
  // Target months for which the lagged predictor value does not exist.
  std::vector<Month> missing_predictor;

  const AlignedRow* find(Month m) const {
    for (const auto& r : rows)
      if (r.target_month == m) return &r;
    return nullptr;
  }

  friend bool operator==(const AlignedDataset&, const AlignedDataset&) = default;
};

inline AlignedDataset align(const SentimentSeries& target, const SentimentSeries& predictor, int horizon) {
  if (horizon < 1) throw DataError("horizon must be >= 1");
  AlignedDataset d;
  d.horizon = horizon;
  d.predictor_label = predictor.label;
  d.target_label = target.label;
  for (const auto& [m, y] : target.values) {
    auto it = predictor.values.find(m - horizon);
    if (it == predictor.values.end()) {
      d.missing_predictor.push_back(m);
      continue;
    }
    d.rows.push_back({m, y, it->second});
  }
  if (d.rows.empty())
    throw DataError("no overlap between " + target.label + " and " + predictor.label + " lagged by " +
                    std::to_string(horizon));
  return d;
}

// CSV `target_month,y,x`.
inline std::string aligned_to_csv(const AlignedDataset& d) {
  std::string out = "target_month,y,x\n";
  for (const auto& r : d.rows)
    out += r.target_month.str() + "," + detail::format_g(r.y, 10) + "," + detail::format_g(r.x, 10) + "\n";
  return out;
}

struct AcfLag {
  int lag = 0;
  double r = 0;
};

struct AcfResult {
  std::vector<AcfLag> lags;
  double bound = 0;

  // Lags with |r| above the ±bound band.
  std::vector<int> significant_lags() const {
    std::vector<int> out;
    for (const auto& l : lags)
      if (std::abs(l.r) > bound) out.push_back(l.lag);
    return out;
  }
};

// Biased sample autocorrelation r(1..max_lag) with ±1.96/√n bounds.
inline AcfResult acf(const std::vector<double>& x, int max_lag) {
  const auto n = x.size();
  if (max_lag < 1 || n <= static_cast<std::size_t>(max_lag))
    throw DataError("acf: series of length " + std::to_string(n) + " too short for lag " + std::to_string(max_lag));
  double mean = 0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double denom = 0;
  for (double v : x) denom += (v - mean) * (v - mean);
  if (!(denom > 0)) throw DataError("acf: series has zero variance");
  AcfResult res;
  res.bound = 1.96 / std::sqrt(static_cast<double>(n));
  for (int k = 1; k <= max_lag; ++k) {
    double num = 0;
    for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) num += (x[t] - mean) * (x[t - k] - mean);
    res.lags.push_back({k, num / denom});
  }
  return res;
}

inline AcfResult acf(const SentimentSeries& s, int max_lag) { return acf(s.as_vector(), max_lag); }

// min(12, max(1, n / 4)).
inline int default_acf_lags(std::size_t n) {
  const int q = static_cast<int>(n / 4);
  return std::min(12, std::max(1, q));
}

} // namespace nowcast
