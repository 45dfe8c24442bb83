#include "nacmint/mint.hpp"

#include <algorithm>

#include "nacmint/error.hpp"

namespace nacmint {

std::array<SmoothedCount, 4> smoothed_match_chain(const std::array<std::size_t, 4>& matched,
                                                  std::size_t matched5) {
  auto m = [&](std::size_t n) -> std::int64_t {
    return static_cast<std::int64_t>(n <= 4 ? matched[n - 1] : matched5);
  };
  // Keep numerators scaled by 3^n so the chain stays exact.
  std::array<SmoothedCount, 4> s;
  std::int64_t prev = m(1) + 1;
  std::int64_t scale = 1;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::int64_t num = prev + scale * (m(n) + m(n + 1));
    scale *= 3;
    s[n - 1] = {num, scale};
    prev = num;
  }
  return s;
}

double harmonic_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double inv = 0.0;
  for (double v : values) {
    if (v <= 0.0) return 0.0;
    inv += 1.0 / v;
  }
  return static_cast<double>(values.size()) / inv;
}

MintReport mint_score(const SourceIndex& index, const TokenSeq& y) {
  if (y.empty()) throw DataError("cannot score an empty summary");
  const TokenSeq& x = index.source();

  std::array<std::size_t, 4> matched{};
  std::array<std::size_t, 4> total{};
  for (std::size_t n = 1; n <= 4; ++n) {
    auto c = matched_ngram_count(x, y, n);
    matched[n - 1] = c.matched;
    total[n - 1] = c.total;
  }
  const std::size_t matched5 = matched_ngram_count(x, y, 5).matched;
  const auto smoothed = smoothed_match_chain(matched, matched5);

  MintReport r;
  r.summary_len = y.size();
  for (std::size_t n = 0; n < 4; ++n) {
    SmoothedCount s = smoothed[n];
    s.denominator *= static_cast<std::int64_t>(std::max<std::size_t>(total[n], 1));
    r.precision[n] = std::min(1.0, s.value());
  }
  r.lcsr = static_cast<double>(lcs_length(x, y)) / static_cast<double>(y.size());

  const std::array<double, 5> parts{r.precision[0], r.precision[1], r.precision[2],
                                    r.precision[3], r.lcsr};
  r.chi = harmonic_mean(parts);
  r.mint = 1.0 - r.chi;

  const FragmentSet frags = greedy_fragments(index, y);
  r.fragment_count = frags.fragments.size();
  r.density = frags.squared_length_sum() / static_cast<double>(y.size());
  return r;
}

MintReport mint_score(const TokenSeq& x, const TokenSeq& y) {
  if (y.empty()) throw DataError("cannot score an empty summary");
  return mint_score(SourceIndex(x), y);
}

MintAggregate corpus_mint(std::span<const MintReport> reports) {
  if (reports.empty()) throw DataError("cannot average MINT over an empty corpus");
  MintAggregate a;
  for (const auto& r : reports) {
    for (std::size_t n = 0; n < 4; ++n) a.precision[n] += r.precision[n];
    a.lcsr += r.lcsr;
    a.chi += r.chi;
    a.mint += r.mint;
    a.density += r.density;
    a.fragment_count += static_cast<double>(r.fragment_count);
    a.summary_len += static_cast<double>(r.summary_len);
  }
  const double k = static_cast<double>(reports.size());
  for (auto& p : a.precision) p /= k;
  a.lcsr /= k;
  a.chi /= k;
  a.mint /= k;
  a.density /= k;
  a.fragment_count /= k;
  a.summary_len /= k;
  a.pairs = reports.size();
  return a;
}

MintAggregate corpus_mint(std::span<const std::pair<TokenSeq, TokenSeq>> pairs) {
  std::vector<MintReport> reports;
  reports.reserve(pairs.size());
  for (const auto& [x, y] : pairs) reports.push_back(mint_score(x, y));
  return corpus_mint(reports);
}

}  // namespace nacmint
