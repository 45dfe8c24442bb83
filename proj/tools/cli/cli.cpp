#include "cli/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli/commands.hpp"
#include "nacmint/error.hpp"
#include "nacmint/lm.hpp"

namespace nacmint::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TokenizerFlags {
  bool no_case_fold = false;
  bool drop_punctuation = false;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--no-case-fold", no_case_fold, "Keep original letter case");
    cmd->add_flag("--drop-punctuation", drop_punctuation, "Discard punctuation tokens");
  }
  TokenizerOptions options() const { return {!no_case_fold, !drop_punctuation}; }
};

std::vector<CorpusRecord> load_corpus(const std::string& path) {
  if (path == "-") return read_corpus(std::cin);
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input '" + path + "'");
  try {
    return read_corpus(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

// Writes through `fn` to `path`, or to `out` when path is empty or "-".
template <class Fn>
auto with_output(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty() || path == "-") return fn(out);
  std::ofstream file(path);
  if (!file) throw DataError("cannot open output '" + path + "'");
  auto result = fn(file);
  file.flush();
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
  return result;
}

std::vector<NacConfig> expand_configs(const std::vector<std::string>& modes,
                                      const std::vector<double>& hs, const NacConfig& base) {
  std::vector<NacConfig> configs;
  const std::size_t n = std::max(modes.size(), hs.size());
  if (modes.size() != n && modes.size() != 1)
    throw UsageError("--mode and --h lists must have equal length or one of them a single value");
  if (hs.size() != n && hs.size() != 1)
    throw UsageError("--mode and --h lists must have equal length or one of them a single value");
  for (std::size_t i = 0; i < n; ++i) {
    NacConfig c = base;
    try {
      c.mode = parse_nac_mode(modes[modes.size() == 1 ? 0 : i]);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    c.half_life = hs[hs.size() == 1 ? 0 : i];
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    configs.push_back(c);
  }
  return configs;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Abstractiveness metrics, constrained decoding and tradeoff reports"};
  app.name("nacmint");
  app.require_subcommand(1);
  app.set_version_flag("--version", "nacmint 0.1.0");

  std::function<int()> action;

  // score ------------------------------------------------------------------
  auto* score = app.add_subcommand("score", "Compute MINT, its components and density per record");
  std::string score_in, score_out;
  ScoreOptions score_opts;
  std::size_t score_trunc = 0;
  TokenizerFlags score_tok;
  score->add_option("-i,--input", score_in, "Corpus (JSON lines, '-' for stdin)")->required();
  score->add_option("-o,--output", score_out, "Score CSV (default stdout)");
  score->add_option("--workers", score_opts.workers, "Worker threads")->check(CLI::PositiveNumber);
  score->add_option("--max-input-words", score_trunc, "Truncate sources to N combined words")
      ->check(CLI::PositiveNumber);
  score_tok.attach(score);
  score->callback([&] {
    action = [&] {
      score_opts.ingest.tokenizer = score_tok.options();
      if (score_trunc) score_opts.ingest.max_input_words = score_trunc;
      const auto records = load_corpus(score_in);
      std::size_t errors = with_output(
          score_out, out, [&](std::ostream& o) { return score_corpus(records, score_opts, o); });
      if (errors) err << errors << " record(s) could not be scored\n";
      return errors ? kDataError : kOk;
    };
  });

  // decode -----------------------------------------------------------------
  auto* decode = app.add_subcommand("decode", "Beam-decode summaries under abstractiveness constraints");
  std::string dec_in, dec_out, dec_model;
  std::vector<std::string> dec_modes{"off"};
  std::vector<double> dec_hs{2.0};
  NacConfig dec_base;
  double dec_norm = -1.0;
  std::size_t dec_trunc = 0, dec_workers = 1;
  TokenizerFlags dec_tok;
  // --h is the half-life, so help is long-form only here.
  decode->set_help_flag("--help", "Print this help message and exit");
  decode->add_option("-i,--input", dec_in, "Corpus (JSON lines, '-' for stdin)")->required();
  decode->add_option("-m,--model", dec_model, "Model file written by 'train'")->required();
  decode->add_option("-o,--output", dec_out, "Decode CSV (default stdout)");
  decode->add_option("--mode", dec_modes, "off|penalty|reward (repeatable)")
      ->capture_default_str();
  decode->add_option("--h", dec_hs, "Half-life length (repeatable, paired with --mode)")
      ->capture_default_str();
  decode->add_option("--exponent", dec_base.exponent, "Discount exponent")->capture_default_str();
  decode->add_option("--beam-size", dec_base.beam_size, "Beam width")->capture_default_str();
  decode->add_option("--min-len", dec_base.min_len, "Minimum output tokens")->capture_default_str();
  decode->add_option("--max-len", dec_base.max_len, "Maximum output tokens")->capture_default_str();
  decode->add_option("--length-norm", dec_norm, "Length normalization exponent for model scores");
  decode->add_option("--max-input-words", dec_trunc, "Truncate sources to N combined words")
      ->check(CLI::PositiveNumber);
  decode->add_option("--workers", dec_workers, "Worker threads")->check(CLI::PositiveNumber);
  dec_tok.attach(decode);
  decode->callback([&] {
    action = [&] {
      if (dec_norm >= 0.0) dec_base.length_norm = dec_norm;
      DecodeOptions opts;
      opts.configs = expand_configs(dec_modes, dec_hs, dec_base);
      opts.workers = dec_workers;
      opts.ingest.tokenizer = dec_tok.options();
      if (dec_trunc) opts.ingest.max_input_words = dec_trunc;
      const NgramModel model = NgramModel::load(fs::path(dec_model));
      const auto records = load_corpus(dec_in);
      std::size_t errors = with_output(
          dec_out, out, [&](std::ostream& o) { return decode_corpus(records, model, opts, o); });
      if (errors) err << errors << " decode(s) failed\n";
      return errors ? kDataError : kOk;
    };
  });

  // train ------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train the built-in n-gram + copy scoring model");
  std::string train_in, train_out, train_text = "summary";
  std::size_t train_order = 3;
  double train_smoothing = 0.1, train_alpha = 0.1;
  TokenizerFlags train_tok;
  train->add_option("-i,--input", train_in, "Corpus (JSON lines)")->required();
  train->add_option("-o,--output", train_out, "Model file")->required();
  train->add_option("--order", train_order, "n-gram order")->capture_default_str()
      ->check(CLI::PositiveNumber);
  train->add_option("--smoothing", train_smoothing, "Additive smoothing constant")
      ->capture_default_str();
  train->add_option("--copy-alpha", train_alpha, "Copy mixture weight in [0,1]")
      ->capture_default_str();
  train->add_option("--text", train_text, "Train on summary|source|both")
      ->check(CLI::IsMember({"summary", "source", "both"}))
      ->capture_default_str();
  train_tok.attach(train);
  train->callback([&] {
    action = [&] {
      const auto records = load_corpus(train_in);
      std::vector<TokenSeq> corpus;
      for (const auto& r : records) {
        if (train_text != "source" && r.summary)
          corpus.push_back(tokenize(*r.summary, train_tok.options()));
        if (train_text != "summary")
          for (const auto& d : r.sources) corpus.push_back(tokenize(d, train_tok.options()));
      }
      NgramModel model = [&] {
        try {
          auto m = NgramModel::train(corpus, train_order, train_smoothing);
          m.set_copy_alpha(train_alpha);
          return m;
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }();
      model.save(fs::path(train_out));
      return kOk;
    };
  });

  // tradeoff ---------------------------------------------------------------
  auto* tradeoff = app.add_subcommand("tradeoff", "Trend lines, F@50 and mu-scores");
  std::string to_points, to_out, to_svg, to_series = "scores";
  std::vector<std::string> to_scores;
  double to_phi = kDefaultPhi;
  auto* points_opt = tradeoff->add_option("--points", to_points,
                                          "CSV with series,label,abstractiveness,factuality");
  auto* scores_opt =
      tradeoff->add_option("--scores", to_scores, "Score CSVs, one point per file (aggregate row)");
  points_opt->excludes(scores_opt);
  tradeoff->add_option("--series", to_series, "Series name for --scores input")
      ->capture_default_str();
  tradeoff->add_option("--phi", to_phi, "Factuality weight")->capture_default_str();
  tradeoff->add_option("-o,--output", to_out, "Report CSV (default stdout)");
  tradeoff->add_option("--svg", to_svg, "Write a scatter plot with trend lines");
  tradeoff->callback([&] {
    action = [&] {
      if (to_points.empty() && to_scores.empty())
        throw UsageError("one of --points or --scores is required");
      if (!(to_phi > 0.0)) throw UsageError("--phi must be positive");
      std::vector<SeriesPoint> points;
      if (!to_points.empty()) {
        std::ifstream in(to_points);
        if (!in) throw DataError("cannot open '" + to_points + "'");
        points = read_points(in);
      } else {
        for (const auto& path : to_scores) {
          std::ifstream in(path);
          if (!in) throw DataError("cannot open '" + path + "'");
          points.push_back({to_series, point_from_scores(in, fs::path(path).stem().string())});
        }
      }
      const auto reports = analyze_tradeoff(points, to_phi);
      std::size_t failed =
          with_output(to_out, out, [&](std::ostream& o) { return write_tradeoff(reports, o); });
      if (!to_svg.empty()) {
        std::ofstream svg(to_svg);
        if (!svg) throw DataError("cannot open '" + to_svg + "'");
        write_svg(reports, svg);
      }
      for (const auto& r : reports)
        if (!r.error.empty()) err << "series '" << r.series << "': " << r.error << '\n';
      return failed ? kDataError : kOk;
    };
  });

  // synth ------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a toy corpus for decoding experiments");
  std::string synth_out;
  SynthOptions synth_opts;
  synth->add_option("-o,--output", synth_out, "Corpus (JSON lines, default stdout)");
  synth->add_option("--documents", synth_opts.documents)->capture_default_str();
  synth->add_option("--seed", synth_opts.seed)->capture_default_str();
  synth->add_option("--vocab", synth_opts.vocab_size)->capture_default_str();
  synth->add_option("--source-len", synth_opts.source_len)->capture_default_str();
  synth->add_option("--docs-per-source", synth_opts.docs_per_source)->capture_default_str();
  synth->add_option("--summary-len", synth_opts.summary_len)->capture_default_str();
  synth->add_option("--copy-rate", synth_opts.copy_rate)->capture_default_str();
  synth->add_option("--id-prefix", synth_opts.id_prefix)->capture_default_str();
  synth->callback([&] {
    action = [&] {
      std::vector<CorpusRecord> corpus;
      try {
        corpus = synthesize_corpus(synth_opts);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      with_output(synth_out, out, [&](std::ostream& o) {
        for (const auto& r : corpus) o << to_json_line(r) << '\n';
        return 0;
      });
      return kOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    return action ? action() : kUsageError;
  } catch (const UsageError& e) {
    err << "nacmint: " << e.what() << '\n';
    return kUsageError;
  } catch (const DataError& e) {
    err << "nacmint: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "nacmint: internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"nacmint"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nacmint::cli
