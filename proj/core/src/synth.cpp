#include "nacmint/synth.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace nacmint {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::vector<std::string> make_words(std::size_t n, Sampler& rng) {
  static constexpr std::string_view kOnsets = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiou";
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (words.size() < n) {
    std::size_t syllables = 2 + rng.index(2);
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
      w.push_back(kOnsets[rng.index(kOnsets.size())]);
      w.push_back(kVowels[rng.index(kVowels.size())]);
    }
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

struct Chain {
  std::vector<std::vector<std::size_t>> next;

  std::size_t step(std::size_t word, Sampler& rng) const {
    if (rng.unit() < 0.1) return rng.index(next.size());
    // Zipf-like preference over the successor list.
    const auto& succ = next[word];
    double z = 0.0;
    for (std::size_t r = 0; r < succ.size(); ++r) z += 1.0 / static_cast<double>(r + 1);
    double u = rng.unit() * z;
    for (std::size_t r = 0; r < succ.size(); ++r) {
      u -= 1.0 / static_cast<double>(r + 1);
      if (u <= 0.0) return succ[r];
    }
    return succ.back();
  }
};

}  // namespace

std::vector<CorpusRecord> synthesize_corpus(const SynthOptions& o) {
  if (o.vocab_size < 2 || o.successors < 1 || o.source_len < 1 || o.summary_len < 1 ||
      o.docs_per_source < 1)
    throw std::invalid_argument("synthetic corpus sizes must be positive");
  Sampler rng(o.seed);
  const auto words = make_words(o.vocab_size, rng);
  Chain chain;
  chain.next.resize(o.vocab_size);
  for (auto& succ : chain.next)
    for (std::size_t k = 0; k < o.successors; ++k) succ.push_back(rng.index(o.vocab_size));

  std::vector<CorpusRecord> corpus;
  corpus.reserve(o.documents);
  for (std::size_t d = 0; d < o.documents; ++d) {
    CorpusRecord rec;
    rec.id = o.id_prefix + std::to_string(d);
    std::vector<std::size_t> flat;  // word ids of all source docs, for copying
    std::vector<std::size_t> doc_start;
    for (std::size_t k = 0; k < o.docs_per_source; ++k) {
      std::string text;
      std::size_t w = rng.index(o.vocab_size);
      doc_start.push_back(flat.size());
      for (std::size_t i = 0; i < o.source_len; ++i) {
        if (i) text.push_back(' ');
        text += words[w];
        flat.push_back(w);
        if (rng.unit() < 1.0 / 15.0 || i + 1 == o.source_len) text.push_back('.');
        w = chain.step(w, rng);
      }
      rec.sources.push_back(std::move(text));
    }

    std::vector<std::size_t> summary;
    std::size_t last = flat[rng.index(flat.size())];
    while (summary.size() < o.summary_len) {
      if (rng.unit() < o.copy_rate) {
        std::size_t p = rng.index(flat.size());
        std::size_t doc_end = flat.size();
        for (std::size_t s : doc_start)
          if (s > p) {
            doc_end = s;
            break;
          }
        std::size_t span = 1;
        while (rng.unit() > 1.0 / o.mean_span) ++span;
        for (std::size_t i = 0; i < span && p + i < doc_end && summary.size() < o.summary_len; ++i)
          summary.push_back(flat[p + i]);
        last = summary.back();
      } else {
        std::size_t n = 1 + rng.index(3);
        for (std::size_t i = 0; i < n && summary.size() < o.summary_len; ++i) {
          last = chain.step(last, rng);
          summary.push_back(last);
        }
      }
    }
    std::string text;
    for (std::size_t i = 0; i < summary.size(); ++i) {
      if (i) text.push_back(' ');
      text += words[summary[i]];
    }
    rec.summary = std::move(text);
    corpus.push_back(std::move(rec));
  }
  return corpus;
}

}  // namespace nacmint
