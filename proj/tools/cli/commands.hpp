#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nacmint/corpus.hpp"
#include "nacmint/mint.hpp"
#include "nacmint/nac.hpp"
#include "nacmint/synth.hpp"
#include "nacmint/tradeoff.hpp"

namespace nacmint::cli {

inline constexpr const char* kScoreFormat = "# nacmint score v1";
inline constexpr const char* kDecodeFormat = "# nacmint decode v1";
inline constexpr const char* kTradeoffFormat = "# nacmint tradeoff v1";
inline constexpr const char* kMeanRowId = "__mean__";

struct IngestOptions {
  TokenizerOptions tokenizer;
  std::optional<std::size_t> max_input_words;
};

struct ScoreOptions {
  IngestOptions ingest;
  std::size_t workers = 1;
};

/// Writes the score CSV; returns the number of per-record errors.
std::size_t score_corpus(const std::vector<CorpusRecord>& records, const ScoreOptions& options,
                         std::ostream& out);

struct DecodeOptions {
  IngestOptions ingest;
  std::vector<NacConfig> configs;
  std::size_t workers = 1;
};

/// Writes the decode CSV (record-major, then config order); returns the
/// number of per-record errors.
std::size_t decode_corpus(const std::vector<CorpusRecord>& records, const ScoringModel& model,
                          const DecodeOptions& options, std::ostream& out);

struct SeriesPoint {
  std::string series;
  TradeoffPoint point;
};

/// Reads `series,label,abstractiveness,factuality` rows.
std::vector<SeriesPoint> read_points(std::istream& in);

/// One point from a score CSV: 100 * mean MINT against mean factuality.
TradeoffPoint point_from_scores(std::istream& in, const std::string& label);

struct SeriesReport {
  std::string series;
  std::vector<TradeoffPoint> points;
  std::vector<double> mu;
  std::optional<TrendFit> fit;
  std::string error;
};

std::vector<SeriesReport> analyze_tradeoff(const std::vector<SeriesPoint>& points, double phi);
/// Writes the tradeoff CSV; returns the number of series that failed.
std::size_t write_tradeoff(const std::vector<SeriesReport>& reports, std::ostream& out);
void write_svg(const std::vector<SeriesReport>& reports, std::ostream& out);

/// Shortest round-trip decimal rendering used in every CSV.
std::string format_number(double v);

}  // namespace nacmint::cli
