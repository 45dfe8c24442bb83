#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nacmint/text.hpp"

namespace nacmint {

enum class NacMode { off, penalty, reward };

std::string_view to_string(NacMode mode);
/// Parses "off", "penalty" or "reward"; throws std::invalid_argument.
NacMode parse_nac_mode(std::string_view text);

struct NacConfig {
  NacMode mode = NacMode::off;
  double half_life = 2.0;  // fragment length at which the discount is 0.5
  double exponent = 2.0;
  std::size_t beam_size = 4;
  std::size_t min_len = 0;
  std::size_t max_len = 64;
  /// When set, the model log-prob (never the discount) is divided by
  /// length^alpha for ranking.
  std::optional<double> length_norm;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Discount probability 2^(-(len/h)^exponent) of an extractive fragment.
double lambda(double half_life, std::size_t length, double exponent = 2.0);

/// Natural log of lambda, computed directly: -(len/h)^exponent * ln 2.
double log_lambda(double half_life, std::size_t length, double exponent = 2.0);

/// Online state of the extractive fragment ending at the last emitted token.
struct FragmentTracker {
  std::vector<std::size_t> match_positions;  // source index of the last token
  std::size_t current_len = 0;

  bool empty() const noexcept { return current_len == 0; }
  friend bool operator==(const FragmentTracker&, const FragmentTracker&) = default;
};

struct TrackerStep {
  FragmentTracker tracker;
  double log_factor = 0.0;
};

/// Advances the tracker by one emitted token and returns the incremental
/// log discount log lambda(l) - log lambda(l - 1) for the fragment it
/// extends or starts (sign flipped in reward mode, zero when off).
TrackerStep step_tracker(const FragmentTracker& tracker, const Token& token,
                         const SourceIndex& index, const NacConfig& config);

/// Sum of log discounts over the greedy fragments of `y`.
double offline_penalty(const TokenSeq& x, const TokenSeq& y, const NacConfig& config);
double offline_penalty(const SourceIndex& index, const TokenSeq& y, const NacConfig& config);

inline constexpr std::string_view kEndOfSequence = "</s>";

using LogDistribution = std::map<Token, double>;

/// Next-token scorer conditioned on a source and an output prefix. The
/// returned log-probabilities must sum to 1 (in probability space) within
/// 1e-6 and may include kEndOfSequence.
class ScoringModel {
 public:
  virtual ~ScoringModel() = default;
  virtual LogDistribution next_distribution(const TokenSeq& source,
                                            std::span<const Token> prefix) const = 0;
};

struct BeamHypothesis {
  std::vector<Token> tokens;
  double model_logprob = 0.0;
  double nac_logdiscount = 0.0;
  FragmentTracker tracker;
  bool finished = false;
};

struct DecodeResult {
  TokenSeq output;
  double model_logprob = 0.0;
  double nac_logdiscount = 0.0;
  double score = 0.0;          // ranking score of the returned hypothesis
  bool forced_finish = false;  // hit max_len without end-of-sequence
};

/// Ranking score of a hypothesis under `config`.
double hypothesis_score(const BeamHypothesis& hyp, const NacConfig& config);

/// Beam search maximizing model log-prob plus the accumulated fragment
/// discount. Throws DecodeError when the model yields no valid continuation
/// or violates its normalization contract.
DecodeResult beam_decode(const ScoringModel& model, const TokenSeq& source,
                         const NacConfig& config);

}  // namespace nacmint
