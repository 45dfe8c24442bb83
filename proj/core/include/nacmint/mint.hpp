#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nacmint/text.hpp"

namespace nacmint {

/// Exact smoothed count numerator / 3^n.
struct SmoothedCount {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const noexcept {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  friend bool operator==(const SmoothedCount& a, const SmoothedCount& b) {
    return a.numerator * b.denominator == b.numerator * a.denominator;
  }
};

/// Chained smoothing of matched n-gram counts: s_0 = m_1 + 1 and
/// s_n = (s_{n-1} + m_n + m_{n+1}) / 3 for n = 1..4, where m_5 is the raw
/// matched 5-gram count.
std::array<SmoothedCount, 4> smoothed_match_chain(const std::array<std::size_t, 4>& matched,
                                                  std::size_t matched5);

/// Harmonic mean; 0 if any value is 0 (or the span is empty).
double harmonic_mean(std::span<const double> values);

struct MintReport {
  std::array<double, 4> precision{};  // smoothed p1..p4
  double lcsr = 0.0;
  double chi = 0.0;
  double mint = 0.0;
  double density = 0.0;
  std::size_t fragment_count = 0;
  std::size_t summary_len = 0;
};

/// Abstractiveness of summary `y` with respect to source `x`.
/// Throws DataError if `y` is empty.
MintReport mint_score(const TokenSeq& x, const TokenSeq& y);
MintReport mint_score(const SourceIndex& index, const TokenSeq& y);

/// Field-wise arithmetic mean over a corpus.
struct MintAggregate {
  std::array<double, 4> precision{};
  double lcsr = 0.0;
  double chi = 0.0;
  double mint = 0.0;
  double density = 0.0;
  double fragment_count = 0.0;
  double summary_len = 0.0;
  std::size_t pairs = 0;
};

/// Throws DataError if `reports` is empty.
MintAggregate corpus_mint(std::span<const MintReport> reports);
MintAggregate corpus_mint(std::span<const std::pair<TokenSeq, TokenSeq>> pairs);

}  // namespace nacmint
