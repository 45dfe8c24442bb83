#include "cli/commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <istream>
#include <map>
#include <ostream>
#include <thread>

#include "nacmint/error.hpp"

namespace nacmint::cli {

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Callers write
// results into slot i, so output order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  if (workers == 1) {
    drain();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(drain);
}

std::string opt_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

std::size_t column(const std::vector<std::string>& header, std::string_view name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("CSV header lacks column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(fmt::format("line {}: '{}' is not a number", line_no, s));
  }
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

// ---------------------------------------------------------------------------
// score

std::size_t score_corpus(const std::vector<CorpusRecord>& records, const ScoreOptions& options,
                         std::ostream& out) {
  struct Row {
    std::optional<MintReport> report;
    std::string status = "ok";
  };
  std::vector<Row> rows(records.size());
  parallel_for(records.size(), options.workers, [&](std::size_t i) {
    const CorpusRecord& rec = records[i];
    try {
      if (!rec.summary) throw DataError("missing summary");
      TokenSeq y = tokenize(*rec.summary, options.ingest.tokenizer);
      if (y.empty()) throw DataError("empty summary");
      TokenSeq x = source_tokens(rec, options.ingest.tokenizer, options.ingest.max_input_words);
      rows[i].report = mint_score(x, y);
    } catch (const std::exception& e) {
      rows[i].status = std::string("error: ") + e.what();
    }
  });

  out << kScoreFormat << '\n';
  out << "id,status,summary_len,fragment_count,p1,p2,p3,p4,lcsr,chi,mint,density,factuality\n";
  std::vector<MintReport> ok;
  std::vector<double> facts;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    out << csv_escape(records[i].id) << ',' << csv_escape(row.status);
    if (row.report) {
      const MintReport& r = *row.report;
      out << ',' << r.summary_len << ',' << r.fragment_count;
      for (double p : r.precision) out << ',' << format_number(p);
      out << ',' << format_number(r.lcsr) << ',' << format_number(r.chi) << ','
          << format_number(r.mint) << ',' << format_number(r.density);
      ok.push_back(r);
      if (records[i].factuality) facts.push_back(*records[i].factuality);
    } else {
      out << ",,,,,,,,,,";
      ++errors;
    }
    out << ',' << opt_number(records[i].factuality) << '\n';
  }

  out << kMeanRowId;
  if (ok.empty()) {
    out << ",error: no scored records,,,,,,,,,,,\n";
    return errors;
  }
  const MintAggregate a = corpus_mint(ok);
  out << ",ok," << format_number(a.summary_len) << ',' << format_number(a.fragment_count);
  for (double p : a.precision) out << ',' << format_number(p);
  out << ',' << format_number(a.lcsr) << ',' << format_number(a.chi) << ','
      << format_number(a.mint) << ',' << format_number(a.density) << ',';
  if (!facts.empty()) {
    double s = 0.0;
    for (double f : facts) s += f;
    out << format_number(s / static_cast<double>(facts.size()));
  }
  out << '\n';
  return errors;
}

// ---------------------------------------------------------------------------
// decode

std::size_t decode_corpus(const std::vector<CorpusRecord>& records, const ScoringModel& model,
                          const DecodeOptions& options, std::ostream& out) {
  struct Row {
    std::optional<DecodeResult> result;
    std::optional<MintReport> report;
    std::string status = "ok";
  };
  const std::size_t k = options.configs.size();
  std::vector<Row> rows(records.size() * k);
  parallel_for(rows.size(), options.workers, [&](std::size_t slot) {
    const CorpusRecord& rec = records[slot / k];
    const NacConfig& cfg = options.configs[slot % k];
    Row& row = rows[slot];
    try {
      TokenSeq x = source_tokens(rec, options.ingest.tokenizer, options.ingest.max_input_words);
      row.result = beam_decode(model, x, cfg);
      if (!row.result->output.empty()) row.report = mint_score(x, row.result->output);
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  });

  out << kDecodeFormat << '\n';
  out << "id,mode,h,status,summary,model_logprob,nac_logdiscount,mint,density,length,forced\n";
  std::size_t errors = 0;
  for (std::size_t slot = 0; slot < rows.size(); ++slot) {
    const Row& row = rows[slot];
    const NacConfig& cfg = options.configs[slot % k];
    out << csv_escape(records[slot / k].id) << ',' << to_string(cfg.mode) << ','
        << format_number(cfg.half_life) << ',' << csv_escape(row.status) << ',';
    if (!row.result) {
      out << ",,,,,,\n";
      ++errors;
      continue;
    }
    const DecodeResult& r = *row.result;
    out << csv_escape(join(r.output)) << ',' << format_number(r.model_logprob) << ','
        << format_number(r.nac_logdiscount) << ',';
    if (row.report)
      out << format_number(row.report->mint) << ',' << format_number(row.report->density);
    else
      out << ',';
    out << ',' << r.output.size() << ',' << (r.forced_finish ? 1 : 0) << '\n';
  }
  return errors;
}

// ---------------------------------------------------------------------------
// tradeoff

std::vector<SeriesPoint> read_points(std::istream& in) {
  std::vector<SeriesPoint> points;
  std::vector<std::string> header;
  std::size_t c_series = 0, c_label = 0, c_a = 0, c_f = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#' || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const DataError& e) {
      throw DataError(fmt::format("line {}: {}", line_no, e.what()));
    }
    if (header.empty()) {
      header = std::move(fields);
      c_series = column(header, "series");
      c_label = column(header, "label");
      c_a = column(header, "abstractiveness");
      c_f = column(header, "factuality");
      continue;
    }
    if (fields.size() != header.size())
      throw DataError(fmt::format("line {}: expected {} fields, got {}", line_no, header.size(),
                                  fields.size()));
    SeriesPoint sp;
    sp.series = fields[c_series];
    sp.point.label = fields[c_label];
    sp.point.abstractiveness = parse_double(fields[c_a], line_no);
    sp.point.factuality = parse_double(fields[c_f], line_no);
    try {
      sp.point.validate();
    } catch (const std::invalid_argument& e) {
      throw DataError(fmt::format("line {}: {}", line_no, e.what()));
    }
    points.push_back(std::move(sp));
  }
  if (header.empty()) throw DataError("points file has no header");
  return points;
}

TradeoffPoint point_from_scores(std::istream& in, const std::string& label) {
  std::vector<std::string> header;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv_line(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.empty() || fields[0] != kMeanRowId) continue;
    if (fields.size() != header.size()) throw DataError(fmt::format("line {}: bad row", line_no));
    const std::string& mint = fields[column(header, "mint")];
    const std::string& fact = fields[column(header, "factuality")];
    if (mint.empty()) throw DataError("score file '" + label + "' has no aggregate MINT");
    if (fact.empty()) throw DataError("score file '" + label + "' has no factuality values");
    TradeoffPoint p{label, 100.0 * parse_double(mint, line_no), parse_double(fact, line_no)};
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what());
    }
    return p;
  }
  throw DataError("score file '" + label + "' has no " + kMeanRowId + " row");
}

std::vector<SeriesReport> analyze_tradeoff(const std::vector<SeriesPoint>& points, double phi) {
  std::vector<SeriesReport> reports;
  std::map<std::string, std::size_t> slot;
  for (const auto& sp : points) {
    auto [it, inserted] = slot.emplace(sp.series, reports.size());
    if (inserted) reports.push_back({sp.series, {}, {}, std::nullopt, {}});
    SeriesReport& r = reports[it->second];
    r.points.push_back(sp.point);
    r.mu.push_back(mu_score(sp.point.factuality, sp.point.abstractiveness, phi));
  }
  for (auto& r : reports) {
    try {
      r.fit = fit_trend(r.points);
    } catch (const std::invalid_argument& e) {
      r.error = e.what();
    }
  }
  return reports;
}

std::size_t write_tradeoff(const std::vector<SeriesReport>& reports, std::ostream& out) {
  out << kTradeoffFormat << '\n';
  out << "kind,series,label,abstractiveness,factuality,mu,slope,intercept,r_squared,f_at_50,"
         "n_points,status\n";
  std::size_t failed = 0;
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      const auto& p = r.points[i];
      out << "point," << csv_escape(r.series) << ',' << csv_escape(p.label) << ','
          << format_number(p.abstractiveness) << ',' << format_number(p.factuality) << ','
          << format_number(r.mu[i]) << ",,,,,,ok\n";
    }
    out << "trend," << csv_escape(r.series) << ",,,,,";
    if (r.fit) {
      out << format_number(r.fit->slope) << ',' << format_number(r.fit->intercept) << ','
          << format_number(r.fit->r_squared) << ',' << format_number(f_at(*r.fit, 50.0)) << ','
          << r.fit->n_points << ",ok\n";
    } else {
      out << ",,,," << r.points.size() << ',' << csv_escape("error: " + r.error) << '\n';
      ++failed;
    }
  }
  return failed;
}

}  // namespace nacmint::cli
