#include "nacmint/text.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace nacmint {

// ---------------------------------------------------------------------------
// TokenSeq

bool TokenSeq::crosses_boundary(std::size_t start, std::size_t length) const {
  if (length <= 1) return false;
  // any boundary b with start < b < start + length
  auto it = std::upper_bound(doc_boundaries.begin(), doc_boundaries.end(), start);
  return it != doc_boundaries.end() && *it < start + length;
}

std::size_t TokenSeq::document_count() const noexcept {
  return tokens.empty() ? 0 : doc_boundaries.size() + 1;
}

std::pair<std::size_t, std::size_t> TokenSeq::document_range(std::size_t doc) const {
  if (doc >= document_count()) throw std::out_of_range("document index out of range");
  std::size_t first = doc == 0 ? 0 : doc_boundaries[doc - 1];
  std::size_t last = doc < doc_boundaries.size() ? doc_boundaries[doc] : tokens.size();
  return {first, last};
}

void TokenSeq::validate() const {
  for (const auto& t : tokens) {
    if (t.empty()) throw std::invalid_argument("TokenSeq contains an empty token");
  }
  for (std::size_t i = 0; i < doc_boundaries.size(); ++i) {
    if (doc_boundaries[i] == 0 || doc_boundaries[i] >= tokens.size())
      throw std::invalid_argument("document boundary out of range");
    if (i > 0 && doc_boundaries[i] <= doc_boundaries[i - 1])
      throw std::invalid_argument("document boundaries not strictly increasing");
  }
}

TokenSeq make_seq(std::vector<Token> tokens) {
  TokenSeq seq{std::move(tokens), {}};
  seq.validate();
  return seq;
}

std::string join(const TokenSeq& seq, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out.append(sep);
    out.append(seq[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer

namespace {

enum class CharClass { separator, word, punctuation };

// Decodes one code point starting at text[i]; advances i. Malformed
// sequences yield 0xFFFFFFFF and consume a single byte.
char32_t decode_utf8(std::string_view text, std::size_t& i) {
  constexpr char32_t kInvalid = 0xFFFFFFFF;
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  std::size_t extra;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kInvalid;
  }
  if (i + extra >= text.size()) {
    ++i;
    return kInvalid;
  }
  for (std::size_t k = 1; k <= extra; ++k) {
    unsigned char b = byte(i + k);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
  if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++i;
    return kInvalid;
  }
  i += extra + 1;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

CharClass classify(char32_t cp) {
  if (cp == 0xFFFFFFFF) return CharClass::separator;
  if (cp < 0x80) {
    if (cp <= 0x20 || cp == 0x7F) return CharClass::separator;
    if ((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z'))
      return CharClass::word;
    return CharClass::punctuation;
  }
  if (in(cp, 0x80, 0x9F) || cp == 0xA0 || cp == 0xAD || cp == 0x1680 || in(cp, 0x2000, 0x200F) ||
      in(cp, 0x2028, 0x202F) || in(cp, 0x205F, 0x206F) || cp == 0x3000 || cp == 0xFEFF)
    return CharClass::separator;
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return CharClass::word;
  if (in(cp, 0xA1, 0xBF) || cp == 0xD7 || cp == 0xF7) return CharClass::punctuation;
  if (in(cp, 0x2010, 0x2027) || in(cp, 0x2030, 0x205E) || in(cp, 0x20A0, 0x20CF) ||
      in(cp, 0x2190, 0x2BFF) || in(cp, 0x3001, 0x3003) || in(cp, 0x3008, 0x3011) ||
      in(cp, 0x3014, 0x301F) || in(cp, 0xFF01, 0xFF0F) || in(cp, 0xFF1A, 0xFF20) ||
      in(cp, 0xFF3B, 0xFF40) || in(cp, 0xFF5B, 0xFF65) || in(cp, 0x1F000, 0x1FAFF))
    return CharClass::punctuation;
  return CharClass::word;
}

// Simple case mapping for Latin, Greek and Cyrillic.
char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (in(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 0x20;
  if (in(cp, 0x100, 0x17F)) {
    if (cp == 0x130) return 'i';
    if (cp == 0x178) return 0xFF;
    if (in(cp, 0x139, 0x148) || in(cp, 0x179, 0x17E)) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp == 0x138 || cp == 0x149 || cp == 0x17F) return cp;
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (in(cp, 0x391, 0x3AB) && cp != 0x3A2) return cp + 0x20;
  if (cp == 0x386) return 0x3AC;
  if (in(cp, 0x388, 0x38A)) return cp + 37;
  if (cp == 0x38C) return 0x3CC;
  if (in(cp, 0x38E, 0x38F)) return cp + 63;
  if (in(cp, 0x410, 0x42F)) return cp + 0x20;
  if (in(cp, 0x400, 0x40F)) return cp + 0x50;
  return cp;
}

void append_tokens(std::string_view text, const TokenizerOptions& options,
                   std::vector<Token>& out) {
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      out.push_back(std::move(word));
      word.clear();
    }
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = decode_utf8(text, i);
    switch (classify(cp)) {
      case CharClass::separator:
        flush();
        break;
      case CharClass::word:
        encode_utf8(options.case_fold ? to_lower(cp) : cp, word);
        break;
      case CharClass::punctuation:
        flush();
        if (options.keep_punctuation) {
          std::string p;
          encode_utf8(cp, p);
          out.push_back(std::move(p));
        }
        break;
    }
  }
  flush();
}

}  // namespace

TokenSeq tokenize(std::string_view text, const TokenizerOptions& options) {
  TokenSeq seq;
  append_tokens(text, options, seq.tokens);
  return seq;
}

TokenSeq tokenize_documents(std::span<const std::string> documents,
                            const TokenizerOptions& options) {
  TokenSeq seq;
  for (const auto& doc : documents) {
    std::size_t before = seq.tokens.size();
    append_tokens(doc, options, seq.tokens);
    if (before > 0 && seq.tokens.size() > before) seq.doc_boundaries.push_back(before);
  }
  return seq;
}

TokenSeq truncate_documents(const TokenSeq& seq, std::size_t max_words) {
  if (seq.size() <= max_words) return seq;
  const std::size_t docs = seq.document_count();
  std::vector<std::size_t> lengths(docs), quota(docs, 0);
  for (std::size_t d = 0; d < docs; ++d) {
    auto [first, last] = seq.document_range(d);
    lengths[d] = last - first;
  }
  // Water-filling: each round splits the remaining budget evenly over the
  // documents that still have words left.
  std::size_t budget = max_words;
  while (budget > 0) {
    std::vector<std::size_t> open;
    for (std::size_t d = 0; d < docs; ++d)
      if (quota[d] < lengths[d]) open.push_back(d);
    if (open.empty()) break;
    std::size_t share = budget / open.size();
    if (share == 0) {
      // fewer words than open documents: earlier documents win
      for (std::size_t k = 0; k < budget; ++k) ++quota[open[k]];
      break;
    }
    for (std::size_t d : open) {
      std::size_t take = std::min(share, lengths[d] - quota[d]);
      quota[d] += take;
      budget -= take;
    }
  }
  TokenSeq out;
  for (std::size_t d = 0; d < docs; ++d) {
    if (quota[d] == 0) continue;
    auto [first, last] = seq.document_range(d);
    if (!out.tokens.empty()) out.doc_boundaries.push_back(out.tokens.size());
    out.tokens.insert(out.tokens.end(), seq.tokens.begin() + static_cast<std::ptrdiff_t>(first),
                      seq.tokens.begin() + static_cast<std::ptrdiff_t>(first + quota[d]));
    (void)last;
  }
  return out;
}

// ---------------------------------------------------------------------------
// n-gram matching

namespace {

std::string ngram_key(const TokenSeq& seq, std::size_t start, std::size_t n) {
  std::string key;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) key.push_back('\x1f');
    key.append(seq[start + k]);
  }
  return key;
}

}  // namespace

NgramCount matched_ngram_count(const TokenSeq& x, const TokenSeq& y, std::size_t n) {
  if (n == 0) throw std::invalid_argument("n-gram order must be >= 1");
  NgramCount count;
  if (y.size() < n) return count;
  std::unordered_set<std::string> source_ngrams;
  if (x.size() >= n) {
    source_ngrams.reserve(x.size() - n + 1);
    for (std::size_t i = 0; i + n <= x.size(); ++i)
      if (!x.crosses_boundary(i, n)) source_ngrams.insert(ngram_key(x, i, n));
  }
  for (std::size_t i = 0; i + n <= y.size(); ++i) {
    if (y.crosses_boundary(i, n)) continue;
    ++count.total;
    if (source_ngrams.count(ngram_key(y, i, n))) ++count.matched;
  }
  return count;
}

// ---------------------------------------------------------------------------
// LCS

namespace {

std::size_t lcs_dp(std::span<const Token> a, std::span<const Token> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto& ta : a) {
    std::size_t diag = 0;  // row[j-1] from the previous iteration of a
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = ta == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

std::size_t lcs_length(const TokenSeq& x, const TokenSeq& y) {
  std::size_t best = 0;
  std::span<const Token> ys(y.tokens);
  for (std::size_t d = 0; d < x.document_count(); ++d) {
    auto [first, last] = x.document_range(d);
    std::span<const Token> xs(x.tokens.data() + first, last - first);
    best = std::max(best, lcs_dp(xs, ys));
    if (best == y.size()) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Fragments

std::size_t FragmentSet::covered_tokens() const noexcept {
  std::size_t n = 0;
  for (const auto& f : fragments) n += f.length;
  return n;
}

double FragmentSet::squared_length_sum() const noexcept {
  double s = 0.0;
  for (const auto& f : fragments) s += static_cast<double>(f.length) * static_cast<double>(f.length);
  return s;
}

SourceIndex::SourceIndex(TokenSeq source) : source_(std::move(source)) {
  source_.validate();
  starts_document_.assign(source_.size(), false);
  if (!source_.empty()) starts_document_[0] = true;
  for (std::size_t b : source_.doc_boundaries) starts_document_[b] = true;
  for (std::size_t p = 0; p < source_.size(); ++p) positions_[source_[p]].push_back(p);
}

std::span<const std::size_t> SourceIndex::positions(const Token& token) const {
  auto it = positions_.find(token);
  if (it == positions_.end()) return {};
  return it->second;
}

bool SourceIndex::has_successor(std::size_t p) const noexcept {
  return p + 1 < source_.size() && !starts_document_[p + 1];
}

std::size_t SourceIndex::longest_match(const TokenSeq& y, std::size_t start) const {
  if (start >= y.size()) return 0;
  auto first = positions(y[start]);
  std::vector<std::size_t> alive(first.begin(), first.end());
  std::size_t length = 0;
  while (!alive.empty()) {
    ++length;
    std::size_t next = start + length;
    if (next >= y.size() || y.crosses_boundary(start, length + 1)) break;
    std::vector<std::size_t> extended;
    for (std::size_t p : alive)
      if (has_successor(p) && source_[p + 1] == y[next]) extended.push_back(p + 1);
    alive = std::move(extended);
  }
  return length;
}

FragmentSet greedy_fragments(const SourceIndex& index, const TokenSeq& y) {
  FragmentSet set;
  std::size_t i = 0;
  while (i < y.size()) {
    std::size_t len = index.longest_match(y, i);
    if (len == 0) {
      ++i;
      continue;
    }
    set.fragments.push_back({i, len});
    i += len;
  }
  return set;
}

FragmentSet greedy_fragments(const TokenSeq& x, const TokenSeq& y) {
  return greedy_fragments(SourceIndex(x), y);
}

}  // namespace nacmint
