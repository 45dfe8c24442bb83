#include <benchmark/benchmark.h>

#include "nacmint/lm.hpp"
#include "nacmint/synth.hpp"

namespace {

using namespace nacmint;

struct Fixture {
  std::vector<CorpusRecord> corpus;
  NgramModel model;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    SynthOptions o;
    o.documents = 120;
    auto corpus = synthesize_corpus(o);
    std::vector<TokenSeq> train;
    for (std::size_t i = 0; i < 100; ++i) train.push_back(tokenize(*corpus[i].summary));
    auto model = NgramModel::train(train, 3, 0.1);
    model.set_copy_alpha(0.1);
    return Fixture{std::move(corpus), std::move(model)};
  }();
  return f;
}

void BM_BeamDecode(benchmark::State& state) {
  const auto& f = fixture();
  NacConfig cfg;
  cfg.mode = static_cast<NacMode>(state.range(0));
  cfg.beam_size = static_cast<std::size_t>(state.range(1));
  cfg.min_len = 15;
  cfg.max_len = 24;
  const TokenSeq x = source_tokens(f.corpus[100]);
  for (auto _ : state) benchmark::DoNotOptimize(beam_decode(f.model, x, cfg));
  state.SetLabel(std::string(to_string(cfg.mode)));
}
BENCHMARK(BM_BeamDecode)
    ->ArgsProduct({{0, 1, 2}, {1, 4, 8}})
    ->Unit(benchmark::kMillisecond);

void BM_NextDistribution(benchmark::State& state) {
  const auto& f = fixture();
  const TokenSeq x = source_tokens(f.corpus[101]);
  std::vector<Token> prefix(x.tokens.begin(), x.tokens.begin() + 6);
  for (auto _ : state) benchmark::DoNotOptimize(f.model.next_distribution(x, prefix));
}
BENCHMARK(BM_NextDistribution);

void BM_OfflinePenalty(benchmark::State& state) {
  const auto& f = fixture();
  const TokenSeq x = source_tokens(f.corpus[102]);
  const TokenSeq y = tokenize(*f.corpus[102].summary);
  NacConfig cfg;
  cfg.mode = NacMode::penalty;
  for (auto _ : state) benchmark::DoNotOptimize(offline_penalty(x, y, cfg));
}
BENCHMARK(BM_OfflinePenalty);

}  // namespace

BENCHMARK_MAIN();
