// nowcast: command-line front end for the scoring and backtest pipeline.
//
//   nowcast ingest   --manifest m.jsonl
//   nowcast score    --manifest m.jsonl --lexicon-excite e.txt --lexicon-anx a.txt -o out/
//   nowcast backtest --index index.csv --diffbroker out/diffbroker.csv --horizons 1,2,3,4 -o out/
//   nowcast report   --target diffprelim.csv --predictor diffbroker.csv [--consensus c.csv]
//   nowcast synth    --seed 42 -o synth/
//
// Every subcommand accepts --config file.json; its keys supply defaults and
// explicit flags override them.

#include <nowcast/nowcast.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace nowcast;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string corpus_manifest;
  std::string corpus_root;
  std::string lexicon_excite;
  std::string lexicon_anx;
  std::string index_table;
  std::string diffbroker;
  std::string output_dir = ".";
  std::string train_start = "2010-08";
  std::string forecast_start = "2012-05";
  std::string forecast_end = "2013-07";
  std::string window_first;
  std::string window_last;
  std::vector<int> horizons{1};
  double alpha = 0.05;

  std::string target;
  std::string predictor;
  std::string consensus;

  std::uint64_t seed = 42;
  int months = 37;
  int docs_per_month = 8;
  int words_per_doc = 300;
  double signal_strength = 1.0;
  double noise_sd = 1.0;
  std::string start = "2010-06";
};

// Options bound to a RunConfig member; values from the --config file are
// applied only to options absent from the command line.
class Binder {
public:
  explicit Binder(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "JSON file supplying defaults for the flags below")
        ->check(CLI::ExistingFile);
  }

  template <class T>
  CLI::Option* bind(const std::string& flags, const std::string& key, T& target, const std::string& help) {
    CLI::Option* opt = app_->add_option(flags, target, help)->capture_default_str();
    apply_.push_back([opt, key, &target](const json& j) {
      if (opt->count() > 0) return;
      const json* node = &j;
      std::size_t pos = 0;
      while (true) {
        const auto dot = key.find('.', pos);
        const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (!node->is_object() || !node->contains(part)) return;
        node = &node->at(part);
        if (dot == std::string::npos) break;
        pos = dot + 1;
      }
      try {
        target = node->get<T>();
      } catch (const json::exception& e) {
        throw ParseError("config key '" + key + "': " + e.what());
      }
    });
    return opt;
  }

  void apply_config() const {
    if (config_path_.empty()) return;
    json j;
    try {
      j = json::parse(detail::read_file(config_path_));
    } catch (const json::exception& e) {
      throw ParseError(config_path_ + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(config_path_ + ": top level must be an object");
    for (const auto& f : apply_) f(j);
  }

private:
  CLI::App* app_;
  std::string config_path_;
  std::vector<std::function<void(const json&)>> apply_;
};

// Files are written under a hidden sibling directory and moved into place
// only after every output has been produced.
class Staging {
public:
  explicit Staging(fs::path dest) : dest_(std::move(dest)) {
    fs::create_directories(dest_);
    std::random_device rd;
    tmp_ = dest_ / (".nowcast-staging-" + std::to_string(rd()));
    fs::create_directories(tmp_);
  }
  ~Staging() {
    std::error_code ec;
    fs::remove_all(tmp_, ec);
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;

  void write(const fs::path& rel, std::string_view content) {
    const fs::path p = tmp_ / rel;
    fs::create_directories(p.parent_path());
    detail::write_file(p, content);
    if (std::find(top_.begin(), top_.end(), *rel.begin()) == top_.end()) top_.push_back(*rel.begin());
  }

  void commit() {
    for (const auto& name : top_) {
      const fs::path to = dest_ / name;
      if (fs::is_directory(to)) fs::remove_all(to);
      fs::rename(tmp_ / name, to);
    }
  }

private:
  fs::path dest_;
  fs::path tmp_;
  std::vector<fs::path> top_;
};

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stdout)); }

// Bold section headings on a colour terminal.
void print_report(const std::string& text) {
  if (!use_color()) {
    std::cout << text;
    return;
  }
  for (auto line : detail::split_lines(text)) {
    if (line.starts_with("=="))
      std::cout << "\033[1m" << line << "\033[0m\n";
    else
      std::cout << line << "\n";
  }
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw IoError(what + " path not given");
  if (!fs::is_regular_file(path)) throw IoError(what + " not found: " + path);
}

std::optional<MonthWindow> scoring_window(const RunConfig& c) {
  if (c.window_first.empty() && c.window_last.empty()) return std::nullopt;
  if (c.window_first.empty() || c.window_last.empty())
    throw DataError("--window-first and --window-last must be given together");
  MonthWindow w{Month::parse(c.window_first), Month::parse(c.window_last)};
  if (w.last < w.first) throw DataError("scoring window ends before it starts");
  return w;
}

BacktestConfig backtest_config(const RunConfig& c) {
  BacktestConfig b{Month::parse(c.train_start), Month::parse(c.forecast_start), Month::parse(c.forecast_end), 1};
  b.validate();
  return b;
}

fs::path corpus_root(const RunConfig& c) {
  return c.corpus_root.empty() ? fs::path(c.corpus_manifest).parent_path() : fs::path(c.corpus_root);
}

int cmd_ingest(const RunConfig& c) {
  require_file(c.corpus_manifest, "corpus manifest");
  std::vector<Document> docs = read_corpus(c.corpus_manifest, corpus_root(c));
  if (auto w = scoring_window(c)) docs = filter_window(std::move(docs), *w);
  const MonthlyBuckets buckets = bucket_by_month(std::move(docs));
  std::size_t n = 0;
  std::uint64_t chars = 0;
  std::cout << "month,documents,chars\n";
  for (const auto& [m, list] : buckets) {
    std::uint64_t mc = 0;
    for (const auto& d : list) mc += d.char_count;
    std::cout << m.str() << "," << list.size() << "," << mc << "\n";
    n += list.size();
    chars += mc;
  }
  std::cerr << "ingest: " << n << " documents, " << chars << " characters in " << buckets.size() << " months";
  if (!buckets.empty()) std::cerr << " (" << buckets.begin()->first.str() << " to " << buckets.rbegin()->first.str() << ")";
  std::cerr << "\n";
  return 0;
}

int cmd_score(const RunConfig& c) {
  require_file(c.corpus_manifest, "corpus manifest");
  require_file(c.lexicon_excite, "excitement lexicon");
  require_file(c.lexicon_anx, "anxiety lexicon");
  const Lexicon ex = load_lexicon(c.lexicon_excite, "excitement");
  const Lexicon anx = load_lexicon(c.lexicon_anx, "anxiety");
  check_lexicons(ex, anx);
  const ScoreResult r = score_documents(read_corpus(c.corpus_manifest, corpus_root(c)), ex, anx, scoring_window(c));
  Staging out(c.output_dir);
  out.write("broker.csv", series_to_csv(r.broker));
  out.write("diffbroker.csv", series_to_csv(r.diffbroker));
  out.write("counts.csv", counts_to_csv(r.counts));
  out.commit();
  std::cerr << "score: " << r.broker.size() << " months (" << r.broker.first_month().str() << " to "
            << r.broker.last_month().str() << ") written to " << c.output_dir << "\n";
  return 0;
}

std::optional<SentimentSeries> consensus_from_index(const IndexTable& table, const BacktestConfig& cfg) {
  const MonthWindow w{cfg.forecast_start, cfg.forecast_end};
  for (Month m = w.first - 1; m <= w.last; ++m) {
    auto it = table.rows.find(m);
    if (it == table.rows.end() || (m >= w.first && !it->second.consensus)) return std::nullopt;
  }
  return build_consensus_diff(table, w);
}

int cmd_backtest(const RunConfig& c) {
  require_file(c.index_table, "index table");
  const std::string diff_path = c.diffbroker.empty() ? (fs::path(c.output_dir) / "diffbroker.csv").string() : c.diffbroker;
  require_file(diff_path, "DIFFBROKER series");
  if (c.horizons.empty()) throw DataError("no horizons given");
  const IndexTable table = load_index_table(c.index_table);
  const SentimentSeries predictor = load_series_csv(diff_path, "DIFFBROKER");
  const BacktestConfig cfg = backtest_config(c);
  check_backtest_coverage(table, predictor, cfg);

  const auto consensus = consensus_from_index(table, cfg);
  const SentimentSeries target = build_target(table, 1);
  const EvaluationReport rep = evaluate({target, predictor, consensus, cfg, c.alpha});
  const auto study = horizon_study(table, predictor, cfg, c.horizons);

  std::string report = format_evaluation_report(rep);
  report += "\n== Sign accuracy by horizon ==\n";
  for (const auto& [h, r] : study) {
    const HitRate hr = sign_hit_rate(r);
    report += std::to_string(h) + " month" + (h == 1 ? "" : "s") + " ahead: " + std::to_string(hr.hits) + "/" +
              std::to_string(hr.total) + "\n";
  }
  if (!consensus) report += "\n(no consensus benchmark: index table lacks consensus values in the forecast window)\n";

  Staging out(c.output_dir);
  for (const auto& [h, r] : study) out.write("backtest_h" + std::to_string(h) + ".csv", backtest_to_csv(r));
  out.write("figure_data.csv", figure_data_csv(rep.broker.result, consensus ? &rep.consensus->result : nullptr));
  out.write("summary.csv", horizon_summary_csv(study));
  out.write("diffprelim.csv", series_to_csv(target));
  out.write("report.txt", report);
  out.commit();
  print_report(report);
  return 0;
}

int cmd_report(const RunConfig& c) {
  if (c.predictor.empty()) throw DataError("--predictor is required");
  if (c.target.empty() == c.index_table.empty()) throw DataError("give exactly one of --target or --index");
  require_file(c.predictor, "predictor series");
  const BacktestConfig cfg = backtest_config(c);
  SentimentSeries target;
  std::optional<SentimentSeries> consensus;
  if (!c.target.empty()) {
    require_file(c.target, "target series");
    target = load_series_csv(c.target, "DIFFPRELIM");
  } else {
    require_file(c.index_table, "index table");
    const IndexTable table = load_index_table(c.index_table);
    target = build_target(table, 1);
    if (c.consensus.empty()) consensus = consensus_from_index(table, cfg);
  }
  if (!c.consensus.empty()) {
    require_file(c.consensus, "consensus series");
    consensus = load_series_csv(c.consensus, "DIFFCONSENSUS");
  }
  const SentimentSeries predictor = load_series_csv(c.predictor, "DIFFBROKER");
  const std::string report = format_evaluation_report(evaluate({target, predictor, consensus, cfg, c.alpha}));
  if (c.output_dir != ".") {
    Staging out(c.output_dir);
    out.write("report.txt", report);
    out.commit();
  }
  print_report(report);
  return 0;
}

int cmd_synth(const RunConfig& c) {
  SynthSpec spec;
  spec.seed = c.seed;
  spec.months = c.months;
  spec.docs_per_month = c.docs_per_month;
  spec.words_per_doc = c.words_per_doc;
  spec.signal_strength = c.signal_strength;
  spec.noise_sd = c.noise_sd;
  spec.start = Month::parse(c.start);
  const SynthCorpus corpus = generate_synthetic(spec);
  Staging out(c.output_dir);
  for (const auto& d : corpus.documents) out.write(d.entry.path, d.text);
  out.write("manifest.jsonl", synth_manifest_jsonl(corpus));
  out.write("index.csv", index_table_to_csv(corpus.index));
  out.write("provenance.json", synth_provenance_json(spec));
  out.commit();
  std::cerr << "synth: " << corpus.documents.size() << " documents over " << spec.months << " months written to "
            << c.output_dir << "\n";
  return 0;
}

void add_corpus_flags(Binder& b, RunConfig& c) {
  b.bind("--manifest", "corpus_manifest", c.corpus_manifest, "JSONL corpus manifest");
  b.bind("--corpus-root", "corpus_root", c.corpus_root, "Directory document paths are relative to (default: manifest's)");
  b.bind("--window-first", "window.first", c.window_first, "Drop documents before this month (YYYY-MM)");
  b.bind("--window-last", "window.last", c.window_last, "Drop documents after this month (YYYY-MM)");
}

void add_window_flags(Binder& b, RunConfig& c) {
  b.bind("--train-start", "window.train_start", c.train_start, "First target month of every training window");
  b.bind("--forecast-start", "window.forecast_start", c.forecast_start, "First forecast target month");
  b.bind("--forecast-end", "window.forecast_end", c.forecast_end, "Last forecast target month");
  b.bind("--alpha", "alpha", c.alpha, "Significance level of the unbiasedness tests");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monthly sentiment nowcasting from broker-report emotion counts"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<std::pair<CLI::App*, std::unique_ptr<Binder>>> subs;
  auto sub = [&](const std::string& name, const std::string& desc) -> Binder& {
    CLI::App* s = app.add_subcommand(name, desc);
    subs.emplace_back(s, std::make_unique<Binder>(s));
    return *subs.back().second;
  };

  Binder& ingest = sub("ingest", "Validate a corpus and list documents per month");
  add_corpus_flags(ingest, cfg);

  Binder& score = sub("score", "Score a corpus into broker.csv, diffbroker.csv and counts.csv");
  add_corpus_flags(score, cfg);
  score.bind("--lexicon-excite", "lexicon_excite", cfg.lexicon_excite, "Excitement lexicon, one term per line");
  score.bind("--lexicon-anx", "lexicon_anx", cfg.lexicon_anx, "Anxiety lexicon, one term per line");
  score.bind("-o,--output-dir", "output_dir", cfg.output_dir, "Output directory");

  Binder& backtest = sub("backtest", "Run the expanding-window backtest from diffbroker.csv and an index table");
  backtest.bind("--index", "index_table", cfg.index_table, "Index table CSV (month,preliminary,final,consensus)");
  backtest.bind("--diffbroker", "diffbroker", cfg.diffbroker, "DIFFBROKER CSV (default: <output-dir>/diffbroker.csv)");
  backtest.bind("--horizons", "horizons", cfg.horizons, "Forecast horizons in months")->delimiter(',');
  add_window_flags(backtest, cfg);
  backtest.bind("-o,--output-dir", "output_dir", cfg.output_dir, "Output directory");

  Binder& report = sub("report", "Print the regression and backtest report for externally supplied series");
  report.bind("--target", "target", cfg.target, "DIFFPRELIM series CSV (month,value)");
  report.bind("--index", "index_table", cfg.index_table, "Index table CSV, instead of --target");
  report.bind("--predictor", "predictor", cfg.predictor, "DIFFBROKER series CSV (month,value)");
  report.bind("--consensus", "consensus", cfg.consensus, "DIFFCONSENSUS series CSV (month,value)");
  add_window_flags(report, cfg);
  report.bind("-o,--output-dir", "output_dir", cfg.output_dir, "Also write report.txt here");

  Binder& synth = sub("synth", "Generate a synthetic corpus and index table with a planted signal");
  synth.bind("--seed", "seed", cfg.seed, "Random seed");
  synth.bind("--months", "months", cfg.months, "Number of corpus months");
  synth.bind("--docs-per-month", "docs_per_month", cfg.docs_per_month, "Documents per month");
  synth.bind("--words-per-doc", "words_per_doc", cfg.words_per_doc, "Mean words per document");
  synth.bind("--signal", "signal_strength", cfg.signal_strength, "Signal strength");
  synth.bind("--noise-sd", "noise_sd", cfg.noise_sd, "Noise standard deviation");
  synth.bind("--start", "start", cfg.start, "First corpus month (YYYY-MM)");
  synth.bind("-o,--output-dir", "output_dir", cfg.output_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [s, b] : subs) {
      if (!s->parsed()) continue;
      b->apply_config();
      const std::string name = s->get_name();
      if (name == "ingest") return cmd_ingest(cfg);
      if (name == "score") return cmd_score(cfg);
      if (name == "backtest") return cmd_backtest(cfg);
      if (name == "report") return cmd_report(cfg);
      if (name == "synth") return cmd_synth(cfg);
    }
  } catch (const Error& e) {
    std::cerr << "nowcast: error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "nowcast: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
