#include <benchmark/benchmark.h>

#include "nacmint/mint.hpp"
#include "nacmint/synth.hpp"

namespace {

using namespace nacmint;

// Source/summary pair from the toy generator at the requested source length.
std::pair<TokenSeq, TokenSeq> make_pair(std::size_t source_len) {
  SynthOptions o;
  o.documents = 1;
  o.source_len = source_len;
  o.summary_len = source_len / 8 + 8;
  auto rec = synthesize_corpus(o).front();
  return {source_tokens(rec), tokenize(*rec.summary)};
}

void BM_Lcs(benchmark::State& state) {
  auto [x, y] = make_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lcs_length(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Lcs)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_GreedyFragments(benchmark::State& state) {
  auto [x, y] = make_pair(static_cast<std::size_t>(state.range(0)));
  SourceIndex index(x);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_fragments(index, y));
}
BENCHMARK(BM_GreedyFragments)->RangeMultiplier(4)->Range(64, 4096);

void BM_MintScore(benchmark::State& state) {
  auto [x, y] = make_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mint_score(x, y));
}
BENCHMARK(BM_MintScore)->RangeMultiplier(4)->Range(64, 4096);

void BM_Tokenize(benchmark::State& state) {
  SynthOptions o;
  o.documents = 1;
  o.source_len = static_cast<std::size_t>(state.range(0));
  const std::string text = synthesize_corpus(o).front().sources.front();
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize)->Arg(512)->Arg(8192);

}  // namespace

BENCHMARK_MAIN();
