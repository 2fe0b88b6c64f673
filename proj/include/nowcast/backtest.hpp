#pragma once

// Expanding-window ex-ante backtest and forecast evaluation.
//
// Step for target month t at horizon h: fit on aligned rows with target
// months in [train_start, t − h], then predict y(t) from x(t) =
// predictor(t − h). The training window start is anchored; its end advances
// one month per step. Nothing dated after t − h enters the prediction.

#include <nowcast/olsreg.hpp>
#include <nowcast/tseries.hpp>

#include <map>
#include <string>
#include <vector>

namespace nowcast {

struct BacktestConfig {
  Month train_start;
  Month forecast_start;
  Month forecast_end;
  int horizon = 1;

  void validate() const {
    if (!(train_start < forecast_start)) throw DataError("backtest: train_start must precede forecast_start");
    if (forecast_end < forecast_start) throw DataError("backtest: forecast_end precedes forecast_start");
    if (horizon < 1) throw DataError("backtest: horizon must be >= 1");
  }
};

struct BacktestStep {
  Month target_month;
  double predicted = 0;
  double realized = 0;
  bool sign_hit = false;
  int fit_n = 0;
  double intercept = 0;
  double slope = 0;

  friend bool operator==(const BacktestStep&, const BacktestStep&) = default;
};

struct BacktestResult {
  std::vector<BacktestStep> steps;
  int horizon = 1;

  std::vector<double> predicted() const {
    std::vector<double> v;
    for (const auto& s : steps) v.push_back(s.predicted);
    return v;
  }
  std::vector<double> realized() const {
    std::vector<double> v;
    for (const auto& s : steps) v.push_back(s.realized);
    return v;
  }

  friend bool operator==(const BacktestResult&, const BacktestResult&) = default;
};

// Zero counts as positive.
inline bool same_sign(double a, double b) { return (a >= 0) == (b >= 0); }

inline BacktestResult expanding_backtest(const AlignedDataset& data, const BacktestConfig& cfg) {
  cfg.validate();
  const int h = cfg.horizon;
  if (data.horizon != h)
    throw DataError("backtest: dataset aligned at horizon " + std::to_string(data.horizon) + ", config has " +
                    std::to_string(h));
  if (!data.find(cfg.train_start))
    throw DataError("backtest: data does not cover train_start " + cfg.train_start.str());

  auto missing_predictor = [&](Month m) {
    for (Month mm : data.missing_predictor)
      if (mm == m) return true;
    return false;
  };

  BacktestResult res;
  res.horizon = h;
  for (Month t = cfg.forecast_start; t <= cfg.forecast_end; ++t) {
    const Month cutoff = t - h;
    std::vector<double> xs, ys;
    for (const auto& r : data.rows) {
      if (r.target_month < cfg.train_start || r.target_month > cutoff) continue;
      xs.push_back(r.x);
      ys.push_back(r.y);
    }
    if (xs.size() < 3)
      throw DataError("backtest: training window " + cfg.train_start.str() + ".." + cutoff.str() + " has " +
                      std::to_string(xs.size()) + " rows, need at least 3");
    const AlignedRow* row = data.find(t);
    if (!row) {
      if (missing_predictor(t))
        throw DataError("backtest: missing predictor value " + data.predictor_label + " at " + (t - h).str() +
                        " for target month " + t.str());
      throw DataError("backtest: no " + data.target_label + " value for target month " + t.str());
    }
    const OlsFit fit = fit_ols(xs, ys);
    BacktestStep s;
    s.target_month = t;
    s.predicted = predict(fit, row->x);
    s.realized = row->y;
    s.sign_hit = same_sign(s.predicted, s.realized);
    s.fit_n = fit.n;
    s.intercept = fit.intercept;
    s.slope = fit.slope;
    res.steps.push_back(s);
  }
  return res;
}

// Evaluates an external forecast series (e.g. DIFFCONSENSUS) as the
// prediction itself, with no fitting: intercept 0, slope 1, fit_n 0.
inline BacktestResult direct_forecast_result(const SentimentSeries& realized, const SentimentSeries& forecast,
                                             const MonthWindow& window) {
  BacktestResult res;
  res.horizon = 1;
  for (Month t = window.first; t <= window.last; ++t) {
    BacktestStep s;
    s.target_month = t;
    s.predicted = forecast.at(t);
    s.realized = realized.at(t);
    s.sign_hit = same_sign(s.predicted, s.realized);
    s.slope = 1;
    res.steps.push_back(s);
  }
  return res;
}

struct HitRate {
  int hits = 0;
  int total = 0;

  double rate() const { return total ? static_cast<double>(hits) / total : 0.0; }
  friend bool operator==(const HitRate&, const HitRate&) = default;
};

inline HitRate sign_hit_rate(const BacktestResult& result) {
  if (result.steps.empty()) throw DataError("sign_hit_rate: empty backtest result");
  HitRate r;
  for (const auto& s : result.steps) r.hits += s.sign_hit;
  r.total = static_cast<int>(result.steps.size());
  return r;
}

// OLS of realized on predicted across the steps.
inline OlsFit realized_on_predicted(const BacktestResult& result) {
  if (result.steps.size() < 3) throw DataError("realized_on_predicted: need at least 3 steps");
  try {
    return fit_ols(result.predicted(), result.realized());
  } catch (const DataError& e) {
    throw DataError(std::string("realized_on_predicted: predictions are constant (") + e.what() + ")");
  }
}

struct UnbiasednessVerdict {
  bool unbiased = false;
  double t_intercept = 0;
  double p_intercept = 0;
  double t_slope_vs_one = 0;
  double p_slope_vs_one = 0;
};

// Unbiased iff neither intercept == 0 nor slope == 1 is rejected at `alpha`.
inline UnbiasednessVerdict unbiasedness_verdict(const OlsFit& fit, double alpha = 0.05) {
  if (!(alpha > 0 && alpha < 1)) throw DataError("unbiasedness_verdict: alpha must be in (0, 1)");
  const TTest ti = coeff_t_test(fit, Coefficient::intercept, 0);
  const TTest ts = coeff_t_test(fit, Coefficient::slope, 1);
  UnbiasednessVerdict v;
  v.t_intercept = ti.t;
  v.p_intercept = ti.p;
  v.t_slope_vs_one = ts.t;
  v.p_slope_vs_one = ts.p;
  v.unbiased = ti.p > alpha && ts.p > alpha;
  return v;
}

// build_target + align + expanding_backtest per horizon over the same
// forecast months. For horizons whose first aligned row falls after
// cfg.train_start, the training window starts at that first row.
inline std::map<int, BacktestResult> horizon_study(const IndexTable& table, const SentimentSeries& predictor,
                                                   const BacktestConfig& cfg, const std::vector<int>& horizons) {
  if (horizons.empty()) throw DataError("horizon_study: no horizons given");
  std::map<int, BacktestResult> out;
  for (int h : horizons) {
    if (h < 1) throw DataError("horizon_study: horizon must be >= 1, got " + std::to_string(h));
    const AlignedDataset data = align(build_target(table, h), predictor, h);
    BacktestConfig c = cfg;
    c.horizon = h;
    if (data.rows.front().target_month > c.train_start) c.train_start = data.rows.front().target_month;
    out.emplace(h, expanding_backtest(data, c));
  }
  return out;
}

// CSV `target_month,predicted,realized,sign_hit,fit_n,intercept,slope`.
inline std::string backtest_to_csv(const BacktestResult& r) {
  using detail::format_g;
  std::string out = "target_month,predicted,realized,sign_hit,fit_n,intercept,slope\n";
  for (const auto& s : r.steps)
    out += s.target_month.str() + "," + format_g(s.predicted, 10) + "," + format_g(s.realized, 10) + "," +
           (s.sign_hit ? "1" : "0") + "," + std::to_string(s.fit_n) + "," + format_g(s.intercept, 10) + "," +
           format_g(s.slope, 10) + "\n";
  return out;
}

// CSV `target_month,realized,consensus_predicted,broker_predicted`; the
// consensus column is empty when no benchmark is available.
inline std::string figure_data_csv(const BacktestResult& broker, const BacktestResult* consensus) {
  using detail::format_g;
  std::string out = "target_month,realized,consensus_predicted,broker_predicted\n";
  for (std::size_t i = 0; i < broker.steps.size(); ++i) {
    const auto& s = broker.steps[i];
    out += s.target_month.str() + "," + format_g(s.realized, 10) + ",";
    if (consensus && i < consensus->steps.size() && consensus->steps[i].target_month == s.target_month)
      out += format_g(consensus->steps[i].predicted, 10);
    out += "," + format_g(s.predicted, 10) + "\n";
  }
  return out;
}

} // namespace nowcast
