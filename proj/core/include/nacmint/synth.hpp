#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nacmint/corpus.hpp"

namespace nacmint {

/// Toy corpus generator used for desk-scale decoding experiments. Sources
/// are random walks over a sparse bigram chain of pseudo-words; reference
/// summaries interleave spans copied from the source with fresh chain
/// output. Fully determined by `seed` (no std distributions involved).
struct SynthOptions {
  std::size_t documents = 60;
  std::size_t vocab_size = 300;
  std::size_t successors = 6;  // preferred next words per word
  std::size_t source_len = 120;
  std::size_t docs_per_source = 1;
  std::size_t summary_len = 24;
  double copy_rate = 0.5;  // chance a summary segment is copied
  double mean_span = 4.0;  // mean copied span length
  std::uint64_t seed = 2021;
  std::string id_prefix = "doc";
};

std::vector<CorpusRecord> synthesize_corpus(const SynthOptions& options);

}  // namespace nacmint
