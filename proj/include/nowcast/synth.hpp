#pragma once

// Deterministic synthetic corpus + index table with a planted signal, for
// validating the pipeline without the proprietary archive.
//
// A latent AR(1) sentiment path modulates how often demo-lexicon words are
// planted in each month's documents. The documents are then scored exactly as
// the real pipeline would score them, and the index table is built so that
//
//   preliminary(t) − final(t−1) = signal · z(t−1) + noise_sd · ε(t)
//
// where z is the measured DIFFBROKER standardised by its sample sd. Final
// values add a revision of sd 0.3·noise_sd; the consensus column is
// final(t−1) plus independent noise of sd 1 + noise_sd.

#include <nowcast/corpus.hpp>
#include <nowcast/demo_lexicons.hpp>
#include <nowcast/emolex.hpp>
#include <nowcast/tseries.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace nowcast {

struct SynthSpec {
  int months = 37;
  int docs_per_month = 8;
  double signal_strength = 1.0;
  double noise_sd = 1.0;
  std::uint64_t seed = 42;
  Month start{2010, 6};
  int words_per_doc = 300;

  void validate() const {
    if (months < 6) throw DataError("synth: months must be >= 6");
    if (docs_per_month < 1) throw DataError("synth: docs_per_month must be >= 1");
    if (!(signal_strength >= 0) || !std::isfinite(signal_strength))
      throw DataError("synth: signal_strength must be >= 0");
    if (!(noise_sd >= 0) || !std::isfinite(noise_sd)) throw DataError("synth: noise_sd must be >= 0");
    if (words_per_doc < 20) throw DataError("synth: words_per_doc must be >= 20");
  }
};

struct SynthCorpus {
  std::vector<Document> documents;
  IndexTable index;
  SentimentSeries broker;
  SentimentSeries latent;
};

namespace detail {

// Portable draws on top of mt19937_64; the standard distributions are
// implementation-defined.
class SynthRng {
public:
  explicit SynthRng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::mt19937_64 eng_;
};

inline std::string synth_document_text(SynthRng& rng, int words, double p_excite, double p_anx) {
  std::string text;
  int in_sentence = 0;
  int sentence_len = 6 + static_cast<int>(rng.index(9));
  for (int w = 0; w < words; ++w) {
    const double u = rng.uniform();
    std::string_view word;
    if (u < p_excite)
      word = demo::excitement_terms[rng.index(demo::excitement_terms.size())];
    else if (u < p_excite + p_anx)
      word = demo::anxiety_terms[rng.index(demo::anxiety_terms.size())];
    else
      word = demo::neutral_terms[rng.index(demo::neutral_terms.size())];
    if (in_sentence == 0) {
      if (!text.empty()) text += ' ';
      text += static_cast<char>(word[0] - 'a' + 'A');
      text += word.substr(1);
    } else {
      text += ' ';
      text += word;
    }
    if (++in_sentence == sentence_len || w + 1 == words) {
      text += '.';
      in_sentence = 0;
      sentence_len = 6 + static_cast<int>(rng.index(9));
    } else if (rng.uniform() < 0.05) {
      text += ',';
    }
  }
  text += '\n';
  return text;
}

} // namespace detail

inline SynthCorpus generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  detail::SynthRng rng(spec.seed);
  const Lexicon excite = demo::excitement_lexicon();
  const Lexicon anx = demo::anxiety_lexicon();

  SynthCorpus out;
  out.latent.label = "LATENT";
  double level = 0;
  for (int i = 0; i < spec.months; ++i) {
    level = 0.6 * level + rng.normal();
    out.latent.values.emplace(spec.start + i, level);
  }

  constexpr double base_rate = 0.02;
  std::vector<std::vector<Document>> by_month(static_cast<std::size_t>(spec.months));
  for (int i = 0; i < spec.months; ++i) {
    const Month m = spec.start + i;
    const double tilt = 0.8 * std::tanh(out.latent.values.at(m));
    for (int k = 0; k < spec.docs_per_month; ++k) {
      const int words = static_cast<int>(spec.words_per_doc * (0.75 + 0.5 * rng.uniform()));
      DocumentEntry e;
      char id[64];
      std::snprintf(id, sizeof id, "%04d%02d-%03d", m.year(), m.month(), k);
      e.id = id;
      e.source = "Broker " + std::string(1, static_cast<char>('A' + (k % 14)));
      const unsigned day = 1 + static_cast<unsigned>(k * 27 / spec.docs_per_month);
      e.date = Date{std::chrono::year{m.year()} / std::chrono::month{static_cast<unsigned>(m.month())} /
                    std::chrono::day{day}};
      e.path = "docs/" + m.str() + "/" + e.id + ".txt";
      by_month[static_cast<std::size_t>(i)].push_back(make_document(
          std::move(e), detail::synth_document_text(rng, words, base_rate * (1 + tilt), base_rate * (1 - tilt))));
    }
  }

  auto month_broker = [&](const std::vector<Document>& docs) {
    EmotionCounts c;
    for (const auto& d : docs) c += score_document(d, excite, anx);
    return (static_cast<double>(c.excitement) - static_cast<double>(c.anxiety)) / static_cast<double>(c.chars);
  };
  std::vector<double> broker(static_cast<std::size_t>(spec.months));
  for (std::size_t i = 0; i < broker.size(); ++i) broker[i] = month_broker(by_month[i]);
  // No exact zero changes, so sign(0) never decides a planted hit.
  for (std::size_t i = 1; i < broker.size(); ++i) {
    while (broker[i] == broker[i - 1]) {
      auto& last = by_month[i].back();
      last = make_document(last.entry, last.text + "Upbeat.\n");
      broker[i] = month_broker(by_month[i]);
    }
  }
  out.broker.label = "BROKER";
  for (std::size_t i = 0; i < broker.size(); ++i) out.broker.values.emplace(spec.start + static_cast<int>(i), broker[i]);
  for (auto& docs : by_month)
    for (auto& d : docs) out.documents.push_back(std::move(d));

  std::vector<double> change(broker.size(), 0.0);
  double mean = 0;
  for (std::size_t i = 1; i < broker.size(); ++i) mean += change[i] = broker[i] - broker[i - 1];
  mean /= static_cast<double>(broker.size() - 1);
  double var = 0;
  for (std::size_t i = 1; i < broker.size(); ++i) var += (change[i] - mean) * (change[i] - mean);
  const double sd = std::sqrt(var / static_cast<double>(broker.size() - 2));

  double prev_final = 75.0;
  out.index.rows.emplace(spec.start, IndexRecord{prev_final, prev_final, std::nullopt});
  for (int i = 1; i <= spec.months; ++i) {
    const std::size_t lag = static_cast<std::size_t>(i - 1);
    const double signal = lag >= 1 ? spec.signal_strength * change[lag] / sd : 0.0;
    const double e1 = rng.normal(), e2 = rng.normal(), e3 = rng.normal();
    IndexRecord r;
    r.preliminary = prev_final + signal + spec.noise_sd * e1;
    r.final_value = r.preliminary + 0.3 * spec.noise_sd * e2;
    r.consensus = prev_final + (1 + spec.noise_sd) * e3;
    out.index.rows.emplace(spec.start + i, r);
    prev_final = r.final_value;
  }
  return out;
}

inline std::string synth_manifest_jsonl(const SynthCorpus& c) {
  std::string out;
  for (const auto& d : c.documents) {
    nlohmann::ordered_json j;
    j["id"] = d.entry.id;
    j["source"] = d.entry.source;
    j["date"] = d.entry.date.str();
    j["path"] = d.entry.path;
    out += j.dump() + "\n";
  }
  return out;
}

inline std::string synth_provenance_json(const SynthSpec& spec) {
  nlohmann::ordered_json j;
  j["generator"] = "nowcast synth";
  j["months"] = spec.months;
  j["docs_per_month"] = spec.docs_per_month;
  j["signal_strength"] = spec.signal_strength;
  j["noise_sd"] = spec.noise_sd;
  j["seed"] = spec.seed;
  j["start"] = spec.start.str();
  j["words_per_doc"] = spec.words_per_doc;
  j["lexicons"] = "demo (data/lexicons)";
  j["model"] = "preliminary(t) - final(t-1) = signal_strength * z(t-1) + noise_sd * e(t); "
               "z = DIFFBROKER / sd(DIFFBROKER); final = preliminary + 0.3 * noise_sd * e'; "
               "consensus = final(t-1) + (1 + noise_sd) * e''";
  return j.dump(2) + "\n";
}

} // namespace nowcast
