#pragma once

// End-to-end compositions used by the command-line tool: corpus scoring and
// the evaluation report (initial-window fit, full-sample fit, ex-ante
// backtest, realized-on-predicted regression and the consensus benchmark).

#include <nowcast/backtest.hpp>
#include <nowcast/corpus.hpp>
#include <nowcast/emolex.hpp>
#include <nowcast/tseries.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nowcast {

struct ScoreResult {
  std::map<Month, EmotionCounts> counts;
  SentimentSeries broker;
  SentimentSeries diffbroker;
};

inline ScoreResult score_documents(std::vector<Document> docs, const Lexicon& excite, const Lexicon& anx,
                                   std::optional<MonthWindow> window = std::nullopt,
                                   const WarningSink& warn = warn_stderr) {
  if (window) docs = filter_window(std::move(docs), *window, warn);
  if (docs.empty()) throw DataError("no documents to score");
  const MonthlyBuckets buckets = bucket_by_month(std::move(docs));
  ScoreResult r;
  r.counts = monthly_counts(buckets, excite, anx);
  r.broker = sentiment_from_counts(r.counts);
  r.diffbroker = diff_series(r.broker);
  return r;
}

inline std::vector<Document> read_corpus(const std::filesystem::path& manifest, const std::filesystem::path& root) {
  std::vector<Document> docs;
  for (const auto& e : load_manifest(manifest)) docs.push_back(read_document(e, root));
  return docs;
}

namespace detail {

// "2013-08..2013-09, 2014-01" for a sorted month list.
inline std::string month_ranges(const std::vector<Month>& months) {
  std::string out;
  for (std::size_t i = 0; i < months.size();) {
    std::size_t j = i;
    while (j + 1 < months.size() && months[j + 1] == months[j] + 1) ++j;
    if (!out.empty()) out += ", ";
    out += months[i].str();
    if (j > i) out += ".." + months[j].str();
    i = j + 1;
  }
  return out;
}

} // namespace detail

// The index table must hold every month of [train_start − 1, forecast_end]
// and the predictor every month of [train_start − 1, forecast_end − 1].
inline void check_backtest_coverage(const IndexTable& table, const SentimentSeries& predictor,
                                    const BacktestConfig& cfg) {
  cfg.validate();
  std::vector<Month> idx, pred;
  for (Month m = cfg.train_start - 1; m <= cfg.forecast_end; ++m) {
    if (!table.rows.count(m)) idx.push_back(m);
    if (m < cfg.forecast_end && !predictor.contains(m)) pred.push_back(m);
  }
  if (!idx.empty()) throw DataError("index table does not cover months " + detail::month_ranges(idx));
  if (!pred.empty())
    throw DataError(predictor.label + " series does not cover months " + detail::month_ranges(pred));
}

struct FitWithDiagnostics {
  OlsFit fit;
  DiagnosticsReport diag;
  Month first;
  Month last;
};

inline FitWithDiagnostics fit_rows(const AlignedDataset& data, Month first, Month last) {
  std::vector<double> xs, ys;
  for (const auto& r : data.rows)
    if (r.target_month >= first && r.target_month <= last) {
      xs.push_back(r.x);
      ys.push_back(r.y);
    }
  FitWithDiagnostics f{fit_ols(xs, ys), {}, first, last};
  f.diag = diagnose(f.fit, xs, ys);
  return f;
}

struct EvaluationInputs {
  SentimentSeries target;    // DIFFPRELIM
  SentimentSeries predictor; // DIFFBROKER
  std::optional<SentimentSeries> consensus; // DIFFCONSENSUS
  BacktestConfig config;
  double alpha = 0.05;
};

struct ForecastEvaluation {
  BacktestResult result;
  HitRate hits;
  std::optional<OlsFit> realized_fit;
  std::optional<UnbiasednessVerdict> verdict;
  std::string error;
};

struct EvaluationReport {
  BacktestConfig config;
  FitWithDiagnostics initial;
  FitWithDiagnostics full;
  ForecastEvaluation broker;
  std::optional<ForecastEvaluation> consensus;
  AcfResult acf_target;
  AcfResult acf_predictor;
  double alpha = 0.05;
};

inline ForecastEvaluation evaluate_forecasts(BacktestResult result, double alpha) {
  ForecastEvaluation e;
  e.hits = sign_hit_rate(result);
  try {
    e.realized_fit = realized_on_predicted(result);
    e.verdict = unbiasedness_verdict(*e.realized_fit, alpha);
  } catch (const Error& err) {
    e.error = err.what();
  }
  e.result = std::move(result);
  return e;
}

inline EvaluationReport evaluate(const EvaluationInputs& in) {
  const BacktestConfig& cfg = in.config;
  if (cfg.horizon != 1) throw DataError("evaluate: the evaluation report is defined at horizon 1");
  const AlignedDataset data = align(in.target, in.predictor, 1);
  EvaluationReport rep{cfg, fit_rows(data, cfg.train_start, cfg.forecast_start - 1),
                       fit_rows(data, cfg.train_start, cfg.forecast_end),
                       evaluate_forecasts(expanding_backtest(data, cfg), in.alpha),
                       std::nullopt, {}, {}, in.alpha};
  if (in.consensus)
    rep.consensus = evaluate_forecasts(
        direct_forecast_result(in.target, *in.consensus, {cfg.forecast_start, cfg.forecast_end}), in.alpha);
  std::vector<double> ys, xs;
  for (const auto& r : data.rows)
    if (r.target_month >= cfg.train_start && r.target_month <= cfg.forecast_end) {
      ys.push_back(r.y);
      xs.push_back(r.x);
    }
  rep.acf_target = acf(ys, default_acf_lags(ys.size()));
  rep.acf_predictor = acf(xs, default_acf_lags(xs.size()));
  return rep;
}

namespace detail {

inline std::string format_acf(const std::string& label, const AcfResult& a) {
  std::string out = "ACF " + label + " (bound +/-" + format_fixed(a.bound, 3) + "):";
  for (const auto& l : a.lags) out += " " + format_fixed(l.r, 3);
  const auto sig = a.significant_lags();
  if (sig.empty()) {
    out += "  [no significant lags]";
  } else {
    out += "  [significant lags:";
    for (int k : sig) out += " " + std::to_string(k);
    out += "]";
  }
  return out + "\n";
}

inline std::string format_evaluation(const std::string& title, const ForecastEvaluation& e, const ReportLabels& labels,
                                     double alpha) {
  std::string out = title + "\n";
  const auto& steps = e.result.steps;
  out += "Sign of " + labels.lhs + " correct on " + std::to_string(e.hits.hits) + " out of " +
         std::to_string(e.hits.total) + " occasions (" + steps.front().target_month.str() + " to " +
         steps.back().target_month.str() + ")\n";
  if (e.realized_fit) {
    out += format_fit_report(*e.realized_fit, nullptr, labels);
    const auto& v = *e.verdict;
    out += "Intercept = 0: t = " + format_fixed(v.t_intercept, 3) + ", p = " + format_fixed(v.p_intercept, 3) +
           "; slope = 1: t = " + format_fixed(v.t_slope_vs_one, 3) + ", p = " + format_fixed(v.p_slope_vs_one, 3) +
           "\n";
    out += std::string("Unbiased at alpha ") + format_g(alpha, 3) + ": " + (v.unbiased ? "yes" : "no") + "\n";
  } else {
    out += "Realized-on-predicted regression unavailable: " + e.error + "\n";
  }
  return out;
}

} // namespace detail

inline std::string format_evaluation_report(const EvaluationReport& r, const std::string& predictor_label = "DIFFBROKER") {
  using detail::format_acf;
  const ReportLabels labels{"DIFFPRELIM", predictor_label};
  std::string out;
  out += "== Initial window: " + r.initial.first.str() + " to " + r.initial.last.str() + " ==\n";
  out += format_fit_report(r.initial.fit, &r.initial.diag, labels);
  out += "\n== Full sample: " + r.full.first.str() + " to " + r.full.last.str() + " ==\n";
  out += format_fit_report(r.full.fit, &r.full.diag, labels);
  out += format_acf("DIFFPRELIM", r.acf_target);
  out += format_acf(predictor_label + "(t-1)", r.acf_predictor);
  out += "\n";
  out += detail::format_evaluation("== Ex-ante backtest: realized on predicted (" + predictor_label + " model) ==",
                                   r.broker, {"DIFFPRELIM(t)", predictor_label + "(t-1) prediction"}, r.alpha);
  if (r.consensus) {
    out += "\n";
    out += detail::format_evaluation("== Benchmark: realized on consensus ==", *r.consensus,
                                     {"DIFFPRELIM", "DIFFCONSENSUS"}, r.alpha);
  }
  out += "\n== Key values ==\n";
  out += fit_key_values(r.initial.fit, &r.initial.diag, "initial.");
  out += fit_key_values(r.full.fit, &r.full.diag, "full.");
  out += "backtest.hits = " + std::to_string(r.broker.hits.hits) + "\n";
  out += "backtest.total = " + std::to_string(r.broker.hits.total) + "\n";
  if (r.broker.realized_fit) out += fit_key_values(*r.broker.realized_fit, nullptr, "realized.");
  if (r.consensus) {
    out += "consensus.hits = " + std::to_string(r.consensus->hits.hits) + "\n";
    out += "consensus.total = " + std::to_string(r.consensus->hits.total) + "\n";
    if (r.consensus->realized_fit) out += fit_key_values(*r.consensus->realized_fit, nullptr, "consensus.");
  }
  return out;
}

// Per-horizon hit-rate summary, CSV `horizon,hits,total,rate`.
inline std::string horizon_summary_csv(const std::map<int, BacktestResult>& results) {
  std::string out = "horizon,hits,total,rate\n";
  for (const auto& [h, r] : results) {
    const HitRate hr = sign_hit_rate(r);
    out += std::to_string(h) + "," + std::to_string(hr.hits) + "," + std::to_string(hr.total) + "," +
           detail::format_g(hr.rate(), 10) + "\n";
  }
  return out;
}

// Parses `key = value` lines (as written by fit_key_values) into a map.
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  for (auto line : detail::split_lines(text)) {
    auto eq = line.find(" = ");
    if (eq == std::string_view::npos) continue;
    out[std::string(detail::trim(line.substr(0, eq)))] = std::string(detail::trim(line.substr(eq + 3)));
  }
  return out;
}

} // namespace nowcast
