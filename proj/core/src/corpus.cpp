#include "nacmint/corpus.hpp"

#include <cmath>
#include <istream>
#include <unordered_set>

#include <json.hpp>

#include "nacmint/error.hpp"

namespace nacmint {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw DataError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

CorpusRecord parse_record(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    fail(line_no, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail(line_no, "record must be a JSON object");

  CorpusRecord r;
  auto id = j.find("id");
  if (id == j.end()) fail(line_no, "missing 'id'");
  if (id->is_string())
    r.id = id->get<std::string>();
  else if (id->is_number_integer())
    r.id = std::to_string(id->get<long long>());
  else
    fail(line_no, "'id' must be a string or integer");
  if (r.id.empty()) fail(line_no, "'id' is empty");

  auto src = j.find("source");
  if (src == j.end()) fail(line_no, "missing 'source'");
  if (src->is_string()) {
    r.sources.push_back(src->get<std::string>());
  } else if (src->is_array()) {
    for (const auto& d : *src) {
      if (!d.is_string()) fail(line_no, "'source' array must contain strings");
      r.sources.push_back(d.get<std::string>());
    }
  } else {
    fail(line_no, "'source' must be a string or an array of strings");
  }
  bool any_text = false;
  for (const auto& d : r.sources) any_text = any_text || !tokenize(d).empty();
  if (!any_text) fail(line_no, "'source' is empty");

  if (auto s = j.find("summary"); s != j.end() && !s->is_null()) {
    if (!s->is_string()) fail(line_no, "'summary' must be a string");
    r.summary = s->get<std::string>();
  }
  if (auto f = j.find("factuality"); f != j.end() && !f->is_null()) {
    if (!f->is_number()) fail(line_no, "'factuality' must be a number");
    double v = f->get<double>();
    if (!std::isfinite(v) || v < 0.0 || v > 100.0) fail(line_no, "'factuality' must be in [0,100]");
    r.factuality = v;
  }
  return r;
}

std::vector<CorpusRecord> read_corpus(std::istream& in) {
  std::vector<CorpusRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    CorpusRecord r = parse_record(line, line_no);
    if (!seen.insert(r.id).second) fail(line_no, "duplicate id '" + r.id + "'");
    records.push_back(std::move(r));
  }
  return records;
}

std::string to_json_line(const CorpusRecord& record) {
  json j;
  j["id"] = record.id;
  if (record.sources.size() == 1)
    j["source"] = record.sources.front();
  else
    j["source"] = record.sources;
  if (record.summary) j["summary"] = *record.summary;
  if (record.factuality) j["factuality"] = *record.factuality;
  return j.dump();
}

TokenSeq source_tokens(const CorpusRecord& record, const TokenizerOptions& options,
                       std::optional<std::size_t> max_words) {
  TokenSeq seq = tokenize_documents(record.sources, options);
  if (max_words) seq = truncate_documents(seq, *max_words);
  return seq;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back().push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) throw DataError("unterminated quoted CSV field");
  return fields;
}

}  // namespace nacmint
