#include "nacmint/lm.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nacmint/error.hpp"

namespace nacmint {

namespace {

constexpr std::string_view kMagic = "nacmint-ngram";
constexpr int kFormatVersion = 1;

std::string context_key(std::span<const Token> context) {
  std::string key;
  for (std::size_t i = 0; i < context.size(); ++i) {
    if (i) key.push_back('\x1f');
    key.append(context[i]);
  }
  return key;
}

// Last `width` tokens of history, left-padded with the begin marker.
std::vector<Token> padded_context(std::span<const Token> history, std::size_t width) {
  std::vector<Token> ctx(width, Token(kBeginOfSequence));
  const std::size_t take = std::min(width, history.size());
  std::copy(history.end() - static_cast<std::ptrdiff_t>(take), history.end(),
            ctx.end() - static_cast<std::ptrdiff_t>(take));
  return ctx;
}

bool has_whitespace(std::string_view t) {
  return t.find_first_of(" \t\n\r\v\f") != std::string_view::npos;
}

}  // namespace

NgramModel NgramModel::train(std::span<const TokenSeq> corpus, std::size_t order,
                             double smoothing) {
  if (corpus.empty()) throw DataError("cannot train an n-gram model on an empty corpus");
  if (order < 1) throw std::invalid_argument("n-gram order must be >= 1");
  if (!(smoothing > 0.0) || !std::isfinite(smoothing))
    throw std::invalid_argument("smoothing constant must be positive");

  NgramModel m;
  m.smoothing_ = smoothing;
  m.weights_.assign(order, 1.0 / static_cast<double>(order));
  m.counts_.resize(order);

  std::set<Token> vocab{Token(kEndOfSequence)};
  for (const auto& seq : corpus) {
    std::vector<Token> padded(order - 1, Token(kBeginOfSequence));
    padded.insert(padded.end(), seq.tokens.begin(), seq.tokens.end());
    padded.emplace_back(kEndOfSequence);
    vocab.insert(seq.tokens.begin(), seq.tokens.end());
    for (std::size_t i = order - 1; i < padded.size(); ++i) {
      for (std::size_t n = 1; n <= order; ++n) {
        std::span<const Token> ctx(padded.data() + i - (n - 1), n - 1);
        m.add_count(ctx, padded[i], 1);
      }
    }
  }
  m.vocab_.assign(vocab.begin(), vocab.end());
  return m;
}

void NgramModel::add_count(std::span<const Token> context, const Token& token, std::uint64_t n) {
  auto& cc = counts_[context.size()][context_key(context)];
  cc.total += n;
  cc.next[token] += n;
}

void NgramModel::set_copy_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("copy_alpha must be in [0,1]");
  copy_alpha_ = alpha;
}

void NgramModel::set_weights(std::vector<double> weights) {
  if (weights.size() != order())
    throw std::invalid_argument("expected one interpolation weight per order");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("interpolation weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("interpolation weights must sum to 1");
  weights_ = std::move(weights);
}

const NgramModel::ContextCounts* NgramModel::find_context(std::span<const Token> context) const {
  if (context.size() >= counts_.size()) return nullptr;
  const auto& table = counts_[context.size()];
  auto it = table.find(context_key(context));
  return it == table.end() ? nullptr : &it->second;
}

std::uint64_t NgramModel::count(std::span<const Token> context, const Token& token) const {
  const ContextCounts* cc = find_context(context);
  if (!cc) return 0;
  auto it = cc->next.find(token);
  return it == cc->next.end() ? 0 : it->second;
}

std::uint64_t NgramModel::context_total(std::span<const Token> context) const {
  const ContextCounts* cc = find_context(context);
  return cc ? cc->total : 0;
}

double NgramModel::ngram_probability(std::span<const Token> history, const Token& token) const {
  if (!std::binary_search(vocab_.begin(), vocab_.end(), token)) return 0.0;
  const double v = static_cast<double>(vocab_.size());
  double p = 0.0;
  for (std::size_t n = 1; n <= order(); ++n) {
    const auto ctx = padded_context(history, n - 1);
    const double c = static_cast<double>(count(ctx, token));
    const double total = static_cast<double>(context_total(ctx));
    p += weights_[n - 1] * (c + smoothing_) / (total + smoothing_ * v);
  }
  return p;
}

std::map<Token, double> NgramModel::ngram_distribution(std::span<const Token> history) const {
  const double v = static_cast<double>(vocab_.size());
  std::vector<double> probs(vocab_.size(), 0.0);
  for (std::size_t n = 1; n <= order(); ++n) {
    const auto ctx = padded_context(history, n - 1);
    const ContextCounts* cc = find_context(ctx);
    const double total = cc ? static_cast<double>(cc->total) : 0.0;
    const double denom = total + smoothing_ * v;
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      double c = 0.0;
      if (cc) {
        auto it = cc->next.find(vocab_[i]);
        if (it != cc->next.end()) c = static_cast<double>(it->second);
      }
      probs[i] += weights_[n - 1] * (c + smoothing_) / denom;
    }
  }
  std::map<Token, double> dist;
  for (std::size_t i = 0; i < vocab_.size(); ++i) dist.emplace_hint(dist.end(), vocab_[i], probs[i]);
  return dist;
}

std::map<Token, double> NgramModel::copy_distribution(const TokenSeq& source,
                                                      std::span<const Token> prefix) {
  std::map<Token, double> dist;
  if (source.empty()) return dist;

  std::vector<bool> starts_doc(source.size(), false);
  starts_doc[0] = true;
  for (std::size_t b : source.doc_boundaries) starts_doc[b] = true;

  std::set<Token> continuations;
  if (!prefix.empty()) {
    // Positions where the longest matching suffix of the prefix ends.
    std::vector<std::size_t> best;
    for (std::size_t p = 0; p < source.size(); ++p)
      if (source[p] == prefix.back()) best.push_back(p);
    for (std::size_t k = 1; k < prefix.size() && !best.empty(); ++k) {
      const Token& want = prefix[prefix.size() - 1 - k];
      std::vector<std::size_t> longer;
      for (std::size_t p : best)
        if (p >= k && !starts_doc[p - k + 1] && source[p - k] == want) longer.push_back(p);
      if (longer.empty()) break;
      best = std::move(longer);
    }
    for (std::size_t p : best)
      if (p + 1 < source.size() && !starts_doc[p + 1]) continuations.insert(source[p + 1]);
  }
  if (continuations.empty()) continuations.insert(source.tokens.begin(), source.tokens.end());

  const double mass = 1.0 / static_cast<double>(continuations.size());
  for (const auto& t : continuations) dist.emplace_hint(dist.end(), t, mass);
  return dist;
}

LogDistribution NgramModel::next_distribution(const TokenSeq& source,
                                              std::span<const Token> prefix) const {
  std::map<Token, double> mix = ngram_distribution(prefix);
  const auto copy = copy_distribution(source, prefix);
  const double alpha = copy.empty() ? 0.0 : copy_alpha_;
  if (alpha > 0.0) {
    for (auto& [t, p] : mix) p *= 1.0 - alpha;
    for (const auto& [t, p] : copy) mix[t] += alpha * p;
  }
  LogDistribution out;
  for (const auto& [t, p] : mix)
    if (p > 0.0) out.emplace_hint(out.end(), t, std::log(p));
  return out;
}

double NgramModel::perplexity(std::span<const TokenSeq> corpus) const {
  double log_sum = 0.0;
  std::size_t n = 0;
  for (const auto& seq : corpus) {
    std::vector<Token> history;
    for (std::size_t i = 0; i <= seq.size(); ++i) {
      const Token token = i < seq.size() ? seq[i] : Token(kEndOfSequence);
      const double p = ngram_probability(history, token);
      if (p <= 0.0) return std::numeric_limits<double>::infinity();
      log_sum += std::log(p);
      ++n;
      history.push_back(token);
    }
  }
  if (n == 0) throw DataError("cannot compute perplexity of an empty corpus");
  return std::exp(-log_sum / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Serialization
//
//   nacmint-ngram 1
//   order <n>
//   smoothing <k>
//   copy_alpha <a>
//   weights <w_1> ... <w_n>
//   vocab <V>
//   <token>                      (V lines, sorted)
//   counts <N>
//   <n> <count> <ctx_1> ... <ctx_{n-1}> <token>   (N lines, sorted)
//
// Tokens are whitespace-free; contexts are padded with "<s>".

void NgramModel::save(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "order " << order() << '\n';
  out << fmt::format("smoothing {}\n", smoothing_);
  out << fmt::format("copy_alpha {}\n", copy_alpha_);
  out << "weights";
  for (double w : weights_) out << fmt::format(" {}", w);
  out << '\n';
  out << "vocab " << vocab_.size() << '\n';
  for (const auto& t : vocab_) {
    if (t.empty() || has_whitespace(t)) throw DataError("token '" + t + "' cannot be serialized");
    out << t << '\n';
  }
  std::vector<std::string> lines;
  for (std::size_t n = 1; n <= order(); ++n) {
    for (const auto& [key, cc] : counts_[n - 1]) {
      std::string ctx = key;
      std::replace(ctx.begin(), ctx.end(), '\x1f', ' ');
      for (const auto& [token, c] : cc.next) {
        std::string line = fmt::format("{} {}", n, c);
        if (!ctx.empty()) line += ' ' + ctx;
        line += ' ' + token;
        lines.push_back(std::move(line));
      }
    }
  }
  std::sort(lines.begin(), lines.end());
  out << "counts " << lines.size() << '\n';
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw std::runtime_error("failed writing n-gram model");
}

void NgramModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  save(out);
}

namespace {

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  std::string next() {
    std::string line;
    if (!std::getline(in, line)) fail("unexpected end of file");
    ++line_no;
    return line;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(fmt::format("n-gram model line {}: {}", line_no, what));
  }
  std::istringstream keyed(std::string_view key) {
    std::istringstream ss(next());
    std::string k;
    ss >> k;
    if (k != key) fail(fmt::format("expected '{}'", key));
    return ss;
  }
};

}  // namespace

NgramModel NgramModel::load(std::istream& in) {
  LineReader r{in};
  {
    std::istringstream ss(r.next());
    std::string magic;
    int version = 0;
    ss >> magic >> version;
    if (magic != kMagic) r.fail("not an n-gram model file");
    if (version != kFormatVersion) r.fail(fmt::format("unsupported format version {}", version));
  }
  NgramModel m;
  std::size_t order = 0;
  if (!(r.keyed("order") >> order) || order == 0) r.fail("bad order");
  if (!(r.keyed("smoothing") >> m.smoothing_) || !(m.smoothing_ > 0.0)) r.fail("bad smoothing");
  double alpha = 0.0;
  if (!(r.keyed("copy_alpha") >> alpha)) r.fail("bad copy_alpha");
  {
    auto ss = r.keyed("weights");
    std::vector<double> w(order);
    for (auto& x : w)
      if (!(ss >> x)) r.fail("bad weights");
    m.weights_ = w;
    m.counts_.resize(order);
    try {
      m.set_weights(std::move(w));
      m.set_copy_alpha(alpha);
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
  }
  std::size_t vocab_size = 0;
  if (!(r.keyed("vocab") >> vocab_size)) r.fail("bad vocab size");
  m.vocab_.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    std::string t = r.next();
    if (t.empty() || has_whitespace(t)) r.fail("bad vocabulary token");
    m.vocab_.push_back(std::move(t));
  }
  if (!std::is_sorted(m.vocab_.begin(), m.vocab_.end()) ||
      std::adjacent_find(m.vocab_.begin(), m.vocab_.end()) != m.vocab_.end())
    r.fail("vocabulary must be sorted and unique");
  std::size_t lines = 0;
  if (!(r.keyed("counts") >> lines)) r.fail("bad count total");
  for (std::size_t i = 0; i < lines; ++i) {
    std::istringstream ss(r.next());
    std::size_t n = 0;
    std::uint64_t c = 0;
    if (!(ss >> n >> c) || n < 1 || n > order) r.fail("bad count line");
    std::vector<Token> words(n);
    for (auto& w : words)
      if (!(ss >> w)) r.fail("bad count line");
    std::string extra;
    if (ss >> extra) r.fail("trailing tokens on count line");
    m.add_count(std::span<const Token>(words.data(), n - 1), words.back(), c);
  }
  return m;
}

NgramModel NgramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  return load(in);
}

}  // namespace nacmint
