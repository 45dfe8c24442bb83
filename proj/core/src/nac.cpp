#include "nacmint/nac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nacmint/error.hpp"

namespace nacmint {

std::string_view to_string(NacMode mode) {
  switch (mode) {
    case NacMode::off:
      return "off";
    case NacMode::penalty:
      return "penalty";
    case NacMode::reward:
      return "reward";
  }
  return "off";
}

NacMode parse_nac_mode(std::string_view text) {
  if (text == "off") return NacMode::off;
  if (text == "penalty") return NacMode::penalty;
  if (text == "reward") return NacMode::reward;
  throw std::invalid_argument("unknown NAC mode '" + std::string(text) + "'");
}

void NacConfig::validate() const {
  if (!(half_life > 0.0) || !std::isfinite(half_life))
    throw std::invalid_argument("half-life h must be a positive finite number");
  if (!(exponent > 0.0) || !std::isfinite(exponent))
    throw std::invalid_argument("exponent must be a positive finite number");
  if (beam_size < 1) throw std::invalid_argument("beam size must be >= 1");
  if (max_len < 1) throw std::invalid_argument("max length must be >= 1");
  if (min_len > max_len) throw std::invalid_argument("min length exceeds max length");
  if (length_norm && (!std::isfinite(*length_norm) || *length_norm < 0.0))
    throw std::invalid_argument("length normalization exponent must be >= 0");
}

double log_lambda(double half_life, std::size_t length, double exponent) {
  if (!(half_life > 0.0)) throw std::invalid_argument("half-life h must be positive");
  if (length == 0) return 0.0;
  return -std::pow(static_cast<double>(length) / half_life, exponent) * std::numbers::ln2;
}

double lambda(double half_life, std::size_t length, double exponent) {
  if (!(half_life > 0.0)) throw std::invalid_argument("half-life h must be positive");
  if (length == 0) return 1.0;
  return std::exp2(-std::pow(static_cast<double>(length) / half_life, exponent));
}

namespace {

double signed_factor(double penalty_log, NacMode mode) {
  switch (mode) {
    case NacMode::off:
      return 0.0;
    case NacMode::penalty:
      return penalty_log;
    case NacMode::reward:
      return -penalty_log;
  }
  return 0.0;
}

}  // namespace

TrackerStep step_tracker(const FragmentTracker& tracker, const Token& token,
                         const SourceIndex& index, const NacConfig& config) {
  const TokenSeq& x = index.source();
  TrackerStep step;
  for (std::size_t p : tracker.match_positions)
    if (index.has_successor(p) && x[p + 1] == token) step.tracker.match_positions.push_back(p + 1);

  double log_factor = 0.0;
  if (!step.tracker.match_positions.empty()) {
    const std::size_t l = tracker.current_len + 1;
    step.tracker.current_len = l;
    log_factor = log_lambda(config.half_life, l, config.exponent) -
                 log_lambda(config.half_life, l - 1, config.exponent);
  } else if (auto starts = index.positions(token); !starts.empty()) {
    step.tracker.match_positions.assign(starts.begin(), starts.end());
    step.tracker.current_len = 1;
    log_factor = log_lambda(config.half_life, 1, config.exponent);
  }
  step.log_factor = signed_factor(log_factor, config.mode);
  return step;
}

double offline_penalty(const SourceIndex& index, const TokenSeq& y, const NacConfig& config) {
  if (config.mode == NacMode::off) return 0.0;
  double total = 0.0;
  for (const auto& f : greedy_fragments(index, y).fragments)
    total += log_lambda(config.half_life, f.length, config.exponent);
  return signed_factor(total, config.mode);
}

double offline_penalty(const TokenSeq& x, const TokenSeq& y, const NacConfig& config) {
  return offline_penalty(SourceIndex(x), y, config);
}

double hypothesis_score(const BeamHypothesis& hyp, const NacConfig& config) {
  double model = hyp.model_logprob;
  if (config.length_norm) {
    const double len = static_cast<double>(std::max<std::size_t>(hyp.tokens.size(), 1));
    model /= std::pow(len, *config.length_norm);
  }
  return model + hyp.nac_logdiscount;
}

namespace {

struct Ranked {
  BeamHypothesis hyp;
  double score;
};

// Best first; equal scores fall back to lexicographic token order.
bool better(const Ranked& a, const Ranked& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.hyp.tokens < b.hyp.tokens;
}

void keep_best(std::vector<Ranked>& v, std::size_t k) {
  if (v.size() > k) {
    std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(), better);
    v.resize(k);
  } else {
    std::sort(v.begin(), v.end(), better);
  }
}

void check_distribution(const LogDistribution& dist) {
  if (dist.empty()) throw DecodeError("scoring model returned an empty distribution");
  double mass = 0.0;
  for (const auto& [token, lp] : dist) {
    if (std::isnan(lp) || lp > 1e-9)
      throw DecodeError("scoring model returned an invalid log-probability for '" + token + "'");
    mass += std::exp(lp);
  }
  if (std::abs(mass - 1.0) > 1e-6)
    throw DecodeError("scoring model distribution sums to " + std::to_string(mass) +
                      ", expected 1");
}

}  // namespace

DecodeResult beam_decode(const ScoringModel& model, const TokenSeq& source,
                         const NacConfig& config) {
  config.validate();
  const SourceIndex index(source);
  const bool monotone = config.mode != NacMode::reward && !config.length_norm;

  std::vector<Ranked> alive{{BeamHypothesis{}, 0.0}};
  std::vector<Ranked> finished;

  for (std::size_t step = 0; step < config.max_len && !alive.empty(); ++step) {
    std::vector<Ranked> next;
    for (const auto& [hyp, score] : alive) {
      const LogDistribution dist = model.next_distribution(source, hyp.tokens);
      check_distribution(dist);
      for (const auto& [token, lp] : dist) {
        if (!std::isfinite(lp)) continue;
        if (token == kEndOfSequence) {
          if (hyp.tokens.size() < config.min_len) continue;
          BeamHypothesis done = hyp;
          done.model_logprob += lp;
          done.finished = true;
          double s = hypothesis_score(done, config);
          finished.push_back({std::move(done), s});
          continue;
        }
        BeamHypothesis ext;
        ext.tokens.reserve(hyp.tokens.size() + 1);
        ext.tokens = hyp.tokens;
        ext.tokens.push_back(token);
        auto tracked = step_tracker(hyp.tracker, token, index, config);
        ext.tracker = std::move(tracked.tracker);
        ext.model_logprob = hyp.model_logprob + lp;
        ext.nac_logdiscount = hyp.nac_logdiscount + tracked.log_factor;
        double s = hypothesis_score(ext, config);
        next.push_back({std::move(ext), s});
      }
    }
    keep_best(next, config.beam_size);
    keep_best(finished, config.beam_size);
    alive = std::move(next);
    // Scores never increase without rewards or normalization, so a finished
    // hypothesis strictly ahead of every live one cannot be overtaken.
    if (monotone && !finished.empty() && !alive.empty() &&
        finished.front().score > alive.front().score)
      break;
  }

  // Hypotheses still alive at max_len are force-finished.
  for (auto& r : alive) {
    if (r.hyp.tokens.size() != config.max_len) continue;
    r.hyp.finished = true;
    finished.push_back(std::move(r));
  }
  keep_best(finished, config.beam_size);
  if (finished.empty()) throw DecodeError("no hypothesis satisfied the length constraints");

  const Ranked& best = finished.front();
  DecodeResult result;
  result.output.tokens = best.hyp.tokens;
  result.model_logprob = best.hyp.model_logprob;
  result.nac_logdiscount = best.hyp.nac_logdiscount;
  result.score = best.score;
  result.forced_finish = best.hyp.tokens.size() == config.max_len;
  return result;
}

}  // namespace nacmint
