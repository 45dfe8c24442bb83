#include "cli/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "cli/commands.hpp"
#include "nacmint/corpus.hpp"
#include "published.hpp"

namespace nacmint::cli {
namespace {

namespace fs = std::filesystem;

const std::string kData = NACMINT_TEST_DATA_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using Table = std::vector<std::map<std::string, std::string>>;

// Parses CSV output after the format marker into header-keyed rows.
Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  Table rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (header.empty()) {
      header = fields;
      continue;
    }
    EXPECT_EQ(fields.size(), header.size()) << line;
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) row[header[i]] = fields[i];
    rows.push_back(row);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("nacmint_cli_") + info->name() + "_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ScoreWritesOneRowPerRecordPlusMean) {
  auto in = write("c.jsonl",
                  "{\"id\":\"a\",\"source\":\"one two three four five six\",\"summary\":\"one two three four five\"}\n"
                  "{\"id\":\"b\",\"source\":\"one two three four five six\",\"summary\":\"seven eight\"}\n");
  auto r = invoke({"score", "-i", in.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind(kScoreFormat, 0), 0u);
  auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["id"], "a");
  EXPECT_EQ(rows[0]["mint"], "0");
  EXPECT_EQ(rows[1]["mint"], "1");
  EXPECT_EQ(rows[2]["id"], kMeanRowId);
  EXPECT_EQ(rows[2]["mint"], "0.5");
  EXPECT_EQ(rows[2]["factuality"], "");
}

TEST_F(CliTest, ScoreMissingSummaryIsDataError) {
  auto in = write("c.jsonl",
                  "{\"id\":\"a\",\"source\":\"x y\",\"summary\":\"x y\"}\n"
                  "{\"id\":\"b\",\"source\":\"x y\"}\n");
  auto r = invoke({"score", "-i", in.string()});
  EXPECT_EQ(r.code, kDataError);
  auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1]["status"], "error: missing summary");
  EXPECT_EQ(rows[2]["status"], "ok");
  EXPECT_NE(r.err.find("1 record"), std::string::npos);
}

TEST_F(CliTest, MalformedInputNamesLine) {
  auto in = write("c.jsonl", "{\"id\":\"a\",\"source\":\"x\",\"summary\":\"x\"}\n{broken\n");
  auto r = invoke({"score", "-i", in.string()});
  EXPECT_EQ(r.code, kDataError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"score", "-i", path("missing.jsonl")}).code, kDataError);
}

// The golden file was reviewed by hand: "copy" is a full in-order copy
// (MINT 0, density 15), "hand" is the 5/11 fixture, "novel" shares nothing.
TEST_F(CliTest, ScoreMatchesGoldenFile) {
  auto r = invoke({"score", "-i", kData + "/score_fixture.jsonl"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out, slurp(kData + "/score_golden.csv"));
  auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[0]["mint"], "0");
  EXPECT_EQ(rows[0]["density"], "15");
  EXPECT_NEAR(std::stod(rows[1]["mint"]), 5.0 / 11.0, 1e-12);
  EXPECT_EQ(rows[2]["mint"], "1");
}

TEST_F(CliTest, ScoreIsIndependentOfWorkerCount) {
  std::string corpus;
  {
    auto s = invoke({"synth", "--documents", "40", "--seed", "5"});
    ASSERT_EQ(s.code, kOk);
    corpus = s.out;
  }
  auto in = write("c.jsonl", corpus);
  auto one = invoke({"score", "-i", in.string(), "--workers", "1"});
  auto four = invoke({"score", "-i", in.string(), "--workers", "4"});
  ASSERT_EQ(one.code, kOk);
  EXPECT_EQ(one.out, four.out);
  auto file = invoke({"score", "-i", in.string(), "-o", path("s.csv"), "--workers", "3"});
  ASSERT_EQ(file.code, kOk);
  EXPECT_TRUE(file.out.empty());
  EXPECT_EQ(slurp(path("s.csv")), one.out);
}

TEST_F(CliTest, ScoreTruncationReducesMatches) {
  auto in = write("c.jsonl",
                  "{\"id\":\"a\",\"source\":\"p q r s t u v w\",\"summary\":\"t u v w\"}\n");
  auto full = parse_csv(invoke({"score", "-i", in.string()}).out);
  auto cut = parse_csv(invoke({"score", "-i", in.string(), "--max-input-words", "4"}).out);
  EXPECT_EQ(full[0]["mint"], "0");
  EXPECT_EQ(cut[0]["mint"], "1");
}

class DecodeCliTest : public CliTest {
 protected:
  void SetUp() override {
    CliTest::SetUp();
    auto s = invoke({"synth", "--documents", "30", "--seed", "11", "--vocab", "80",
                     "--source-len", "50", "-o", path("corpus.jsonl")});
    ASSERT_EQ(s.code, kOk) << s.err;
    auto t = invoke({"train", "-i", path("corpus.jsonl"), "-o", path("model.txt")});
    ASSERT_EQ(t.code, kOk) << t.err;
  }

  Result decode(std::vector<std::string> extra) {
    std::vector<std::string> args{"decode", "-i", path("corpus.jsonl"), "-m", path("model.txt"),
                                  "--max-len", "12", "--min-len", "4"};
    args.insert(args.end(), extra.begin(), extra.end());
    return invoke(args);
  }
};

TEST_F(DecodeCliTest, ZipsModesAndHalfLives) {
  auto r = decode({"--mode", "off", "--mode", "penalty", "--mode", "reward", "--h", "2", "--h",
                   "4", "--h", "2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind(kDecodeFormat, 0), 0u);
  auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 90u);
  EXPECT_EQ(rows[0]["mode"], "off");
  EXPECT_EQ(rows[1]["mode"], "penalty");
  EXPECT_EQ(rows[1]["h"], "4");
  EXPECT_EQ(rows[2]["mode"], "reward");
  for (const auto& row : rows) {
    EXPECT_EQ(row.at("status"), "ok");
    EXPECT_LE(std::stoul(row.at("length")), 12u);
  }
}

TEST_F(DecodeCliTest, DeterministicAcrossRunsAndWorkers) {
  auto a = decode({"--mode", "penalty", "--workers", "1"});
  auto b = decode({"--mode", "penalty", "--workers", "4"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, decode({"--mode", "penalty"}).out);
}

TEST_F(DecodeCliTest, UsageErrors) {
  EXPECT_EQ(decode({"--mode", "sideways"}).code, kUsageError);
  EXPECT_EQ(decode({"--mode", "off", "--mode", "penalty", "--h", "1", "--h", "2", "--h", "3"}).code,
            kUsageError);
  EXPECT_EQ(decode({"--h", "0"}).code, kUsageError);
  EXPECT_EQ(decode({"--beam-size", "0"}).code, kUsageError);
  auto bad_model = write("bad.txt", "not a model\n");
  EXPECT_EQ(invoke({"decode", "-i", path("corpus.jsonl"), "-m", bad_model.string()}).code,
            kDataError);
  EXPECT_EQ(invoke({"decode", "--help"}).code, kOk);
}

TEST_F(DecodeCliTest, TruncatedSourceStillDecodes) {
  auto r = decode({"--max-input-words", "5", "--mode", "penalty"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(parse_csv(r.out).size(), 30u);
}

TEST_F(CliTest, TradeoffOnPublishedPoints) {
  auto r = invoke({"tradeoff", "--points", kData + "/published_points.csv", "--svg", path("p.svg")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind(kTradeoffFormat, 0), 0u);
  auto rows = parse_csv(r.out);
  std::map<std::string, double> f50;
  std::size_t n_points = 0;
  for (auto& row : rows) {
    if (row["kind"] == "trend") f50[row["series"]] = std::stod(row["f_at_50"]);
    if (row["kind"] == "point") {
      ++n_points;
      double mu = mu_score(std::stod(row["factuality"]), std::stod(row["abstractiveness"]));
      EXPECT_NEAR(std::stod(row["mu"]), mu, 1e-12);
    }
  }
  EXPECT_EQ(n_points, 17u);
  for (const auto& q : published::kQuotedF50) EXPECT_NEAR(f50.at(std::string(q.series)), q.f50, 0.5);
  auto svg = slurp(path("p.svg"));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("XSum"), std::string::npos);
}

TEST_F(CliTest, TradeoffTwoPointSeriesIsExact) {
  auto in = write("p.csv", "series,label,abstractiveness,factuality\ns,a,20,80\ns,b,60,60\n");
  auto rows = parse_csv(invoke({"tradeoff", "--points", in.string()}).out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2]["kind"], "trend");
  EXPECT_EQ(rows[2]["slope"], "-0.5");
  EXPECT_EQ(rows[2]["intercept"], "90");
  EXPECT_EQ(rows[2]["f_at_50"], "65");
}

TEST_F(CliTest, TradeoffDegenerateSeriesReportedAlongsideOthers) {
  auto in = write("p.csv",
                  "series,label,abstractiveness,factuality\n"
                  "bad,a,30,70\nbad,b,30,60\ngood,a,10,90\ngood,b,50,50\nlonely,a,5,5\n");
  auto r = invoke({"tradeoff", "--points", in.string()});
  EXPECT_EQ(r.code, kDataError);
  auto rows = parse_csv(r.out);
  std::map<std::string, std::string> status;
  for (auto& row : rows)
    if (row["kind"] == "trend") status[row["series"]] = row["status"];
  EXPECT_EQ(status["good"], "ok");
  EXPECT_EQ(status["bad"].rfind("error:", 0), 0u);
  EXPECT_EQ(status["lonely"].rfind("error:", 0), 0u);
  EXPECT_NE(r.err.find("bad"), std::string::npos);
}

TEST_F(CliTest, TradeoffFromScoreFiles) {
  std::vector<std::string> args{"tradeoff", "--series", "toy", "-o", path("t.csv")};
  std::vector<std::pair<double, double>> expected;
  for (int k = 0; k < 3; ++k) {
    std::string corpus;
    for (int i = 0; i < 4; ++i) {
      CorpusRecord rec{std::to_string(i), {"a b c d e f g h"}, {}, 40.0 + 10 * k + i};
      rec.summary = k == 0 ? "a b c d" : k == 1 ? "a b x d" : "x y z w";
      corpus += to_json_line(rec) + "\n";
    }
    auto in = write("c" + std::to_string(k) + ".jsonl", corpus);
    std::string out = path("run" + std::to_string(k) + ".csv");
    ASSERT_EQ(invoke({"score", "-i", in.string(), "-o", out}).code, kOk);
    args.insert(args.end(), {"--scores", out});
    std::ifstream sf(out);
    expected.push_back({point_from_scores(sf, "x").abstractiveness, 41.5 + 10 * k});
  }
  auto r = invoke(args);
  ASSERT_EQ(r.code, kOk) << r.err;
  auto rows = parse_csv(slurp(path("t.csv")));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0]["label"], "run0");
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i]["series"], "toy");
    EXPECT_DOUBLE_EQ(std::stod(rows[i]["factuality"]), expected[i].second);
    EXPECT_DOUBLE_EQ(std::stod(rows[i]["mu"]),
                     mu_score(expected[i].second, expected[i].first));
  }
  EXPECT_DOUBLE_EQ(std::stod(rows[0]["abstractiveness"]), 0.0);
  EXPECT_DOUBLE_EQ(std::stod(rows[2]["abstractiveness"]), 100.0);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(invoke({}).code, kUsageError);
  EXPECT_EQ(invoke({"score"}).code, kUsageError);
  EXPECT_EQ(invoke({"tradeoff"}).code, kUsageError);
  EXPECT_EQ(invoke({"tradeoff", "--points", "a", "--scores", "b"}).code, kUsageError);
  EXPECT_EQ(invoke({"tradeoff", "--points", kData + "/published_points.csv", "--phi", "0"}).code,
            kUsageError);
  EXPECT_EQ(invoke({"score", "-i", "x", "--workers", "0"}).code, kUsageError);
  EXPECT_EQ(invoke({"train", "-i", kData + "/score_fixture.jsonl", "-o", path("m"), "--copy-alpha",
                    "2"}).code,
            kUsageError);
  EXPECT_EQ(invoke({"--help"}).code, kOk);
}

TEST_F(CliTest, SynthIsSeeded) {
  auto a = invoke({"synth", "--documents", "5", "--seed", "3"});
  auto b = invoke({"synth", "--documents", "5", "--seed", "3"});
  auto c = invoke({"synth", "--documents", "5", "--seed", "4"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  std::istringstream in(a.out);
  EXPECT_EQ(read_corpus(in).size(), 5u);
}

}  // namespace
}  // namespace nacmint::cli
