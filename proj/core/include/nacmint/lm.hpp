#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nacmint/nac.hpp"
#include "nacmint/text.hpp"

namespace nacmint {

inline constexpr std::string_view kBeginOfSequence = "<s>";

/// Interpolated additive-smoothed word n-gram model mixed with a copy
/// distribution over the current source:
///   p(w) = copy_alpha * copy(w) + (1 - copy_alpha) * sum_n weight_n * p_n(w | ctx_n)
/// with p_n(w | ctx) = (c(ctx, w) + k) / (c(ctx) + k * |V|).
class NgramModel final : public ScoringModel {
 public:
  /// Throws DataError on an empty corpus, std::invalid_argument on order 0
  /// or a non-positive smoothing constant.
  static NgramModel train(std::span<const TokenSeq> corpus, std::size_t order,
                          double smoothing = 0.1);

  std::size_t order() const noexcept { return weights_.size(); }
  double smoothing() const noexcept { return smoothing_; }
  double copy_alpha() const noexcept { return copy_alpha_; }
  void set_copy_alpha(double alpha);
  std::span<const double> weights() const noexcept { return weights_; }
  /// One weight per order (unigram first); must be non-negative and sum to 1.
  void set_weights(std::vector<double> weights);
  /// Sorted vocabulary including the end-of-sequence token.
  const std::vector<Token>& vocab() const noexcept { return vocab_; }

  std::uint64_t count(std::span<const Token> context, const Token& token) const;
  std::uint64_t context_total(std::span<const Token> context) const;

  /// Interpolated n-gram probability of `token` after `history`.
  double ngram_probability(std::span<const Token> history, const Token& token) const;
  std::map<Token, double> ngram_distribution(std::span<const Token> history) const;

  /// Uniform over tokens that continue the longest suffix of `prefix`
  /// matching the source; uniform over the source's tokens when nothing
  /// continues. Empty for an empty source.
  static std::map<Token, double> copy_distribution(const TokenSeq& source,
                                                   std::span<const Token> prefix);

  LogDistribution next_distribution(const TokenSeq& source,
                                    std::span<const Token> prefix) const override;

  /// Per-token perplexity of the n-gram component (end-of-sequence included).
  double perplexity(std::span<const TokenSeq> corpus) const;

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  /// Throws DataError on a malformed or unsupported file.
  static NgramModel load(std::istream& in);
  static NgramModel load(const std::filesystem::path& path);

 private:
  struct ContextCounts {
    std::uint64_t total = 0;
    std::unordered_map<Token, std::uint64_t> next;
  };

  NgramModel() = default;
  const ContextCounts* find_context(std::span<const Token> context) const;
  void add_count(std::span<const Token> context, const Token& token, std::uint64_t n);

  double smoothing_ = 0.1;
  double copy_alpha_ = 0.0;
  std::vector<double> weights_;
  std::vector<Token> vocab_;
  // counts_[n - 1]: context of n - 1 tokens (joined) -> next-token counts
  std::vector<std::unordered_map<std::string, ContextCounts>> counts_;
};

}  // namespace nacmint
