#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nacmint {

using Token = std::string;

/// Normalized token sequence. A source built from several documents keeps
/// the index of the first token of every document after the first in
/// `doc_boundaries`; n-grams, fragments and LCS never span a boundary.
struct TokenSeq {
  std::vector<Token> tokens;
  std::vector<std::size_t> doc_boundaries;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  const Token& operator[](std::size_t i) const { return tokens[i]; }

  /// True if [start, start + length) spans a document boundary.
  bool crosses_boundary(std::size_t start, std::size_t length) const;

  /// Number of documents (1 for a non-empty single document, 0 if empty).
  std::size_t document_count() const noexcept;

  /// Half-open token range [first, last) of document `doc`.
  std::pair<std::size_t, std::size_t> document_range(std::size_t doc) const;

  /// Throws std::invalid_argument if an invariant is violated.
  void validate() const;

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

/// Build a TokenSeq from already-normalized tokens (single document).
TokenSeq make_seq(std::vector<Token> tokens);

/// Space-joined rendering of the tokens.
std::string join(const TokenSeq& seq, std::string_view sep = " ");

struct TokenizerOptions {
  bool case_fold = true;
  bool keep_punctuation = true;
};

/// Lowercased UTF-8 word tokenization. Letters, digits and non-ASCII
/// letters form words; every punctuation or symbol code point becomes its
/// own token (or is dropped); whitespace and control characters separate.
TokenSeq tokenize(std::string_view text, const TokenizerOptions& options = {});

/// Tokenize each document and concatenate, recording boundaries. Empty
/// documents contribute nothing.
TokenSeq tokenize_documents(std::span<const std::string> documents,
                            const TokenizerOptions& options = {});

/// Truncate a (possibly multi-document) sequence so the combined length is
/// at most `max_words`. The budget is shared evenly across documents; any
/// share a short document leaves unused is redistributed to the others.
TokenSeq truncate_documents(const TokenSeq& seq, std::size_t max_words);

struct NgramCount {
  std::size_t matched = 0;
  std::size_t total = 0;
  friend bool operator==(const NgramCount&, const NgramCount&) = default;
};

/// Occurrences of n-grams of `y` that appear anywhere in `x`, counted with
/// multiplicity (no clipping). Throws std::invalid_argument if n == 0.
NgramCount matched_ngram_count(const TokenSeq& x, const TokenSeq& y, std::size_t n);

/// Length of the longest common subsequence. For a multi-document `x` the
/// subsequence is confined to a single document.
std::size_t lcs_length(const TokenSeq& x, const TokenSeq& y);

struct Fragment {
  std::size_t summary_start = 0;
  std::size_t length = 0;
  friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct FragmentSet {
  std::vector<Fragment> fragments;

  std::size_t covered_tokens() const noexcept;
  double squared_length_sum() const noexcept;
};

/// Token -> ascending source positions.
class SourceIndex {
 public:
  explicit SourceIndex(TokenSeq source);

  const TokenSeq& source() const noexcept { return source_; }
  std::span<const std::size_t> positions(const Token& token) const;
  bool contains(const Token& token) const { return positions_.count(token) != 0; }

  /// True if source position p + 1 exists and lies in the same document as p.
  bool has_successor(std::size_t p) const noexcept;

  /// Length of the longest prefix of y[start..] occurring contiguously in the
  /// source without crossing a boundary of either sequence.
  std::size_t longest_match(const TokenSeq& y, std::size_t start) const;

 private:
  TokenSeq source_;
  std::vector<bool> starts_document_;
  std::unordered_map<Token, std::vector<std::size_t>> positions_;
};

/// Greedy left-to-right decomposition of `y` into maximal extractive
/// fragments: at each uncovered position take the longest match.
FragmentSet greedy_fragments(const SourceIndex& index, const TokenSeq& y);
FragmentSet greedy_fragments(const TokenSeq& x, const TokenSeq& y);

}  // namespace nacmint
