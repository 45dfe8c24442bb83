#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nacmint/text.hpp"

namespace nacmint {

/// One line of a corpus file:
///   {"id": "...", "source": "text" | ["doc", ...], "summary": "...", "factuality": 73.5}
/// `summary` and `factuality` are optional.
struct CorpusRecord {
  std::string id;
  std::vector<std::string> sources;
  std::optional<std::string> summary;
  std::optional<double> factuality;
};

/// Parses one JSON line. Throws DataError naming `line_no` on failure.
CorpusRecord parse_record(std::string_view line, std::size_t line_no);

/// Reads a line-delimited JSON corpus; blank lines are skipped. Throws
/// DataError (with the offending line number) on malformed lines or
/// duplicate ids.
std::vector<CorpusRecord> read_corpus(std::istream& in);

std::string to_json_line(const CorpusRecord& record);

/// Tokenized source with document boundaries, optionally truncated to a
/// combined `max_words`.
TokenSeq source_tokens(const CorpusRecord& record, const TokenizerOptions& options = {},
                       std::optional<std::size_t> max_words = std::nullopt);

// Minimal RFC 4180 helpers.
std::string csv_escape(std::string_view field);
/// Splits one CSV record. Throws DataError on an unterminated quote.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace nacmint
