#include "lucy/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "lucy/errors.hpp"
#include "lucy/parse.hpp"
#include "lucy/prompts.hpp"

namespace lucy {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::vector<QARecord> qa_records_from_json(const nlohmann::json& j) {
  std::vector<QARecord> out;
  try {
    for (const nlohmann::json& rj : j) {
      QARecord r;
      r.id = rj.at("id").get<std::string>();
      r.video_id = rj.at("video_id").get<std::string>();
      r.stem = rj.at("stem").get<std::string>();
      r.options = rj.value("options", std::vector<std::string>{});
      r.answer = rj.at("answer").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed question record: ") + e.what());
  }
  if (out.empty()) throw ConfigError("question set is empty");
  return out;
}

nlohmann::json qa_records_to_json(const std::vector<QARecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const QARecord& r : records)
    arr.push_back({{"id", r.id},
                   {"video_id", r.video_id},
                   {"stem", r.stem},
                   {"options", r.options},
                   {"answer", r.answer}});
  return arr;
}

QARecord qa_record_from_sim(const SimQA& qa) {
  QARecord r;
  r.id = qa.id;
  r.video_id = qa.video_id;
  r.stem = qa.stem;
  r.options = qa.options;
  r.answer = qa.answer_label.empty() ? qa.answer_text : qa.answer_label;
  return r;
}

std::string render_question(const std::string& stem, const std::vector<std::string>& options) {
  if (options.size() > 26) throw ConfigError("too many options for letter labels");
  std::string out = stem;
  for (std::size_t i = 0; i < options.size(); ++i) {
    out += "\n";
    out += static_cast<char>('A' + i);
    out += ". " + options[i];
  }
  return out;
}

std::string normalize_answer_label(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    while (!tok.empty() && (tok.back() == '.' || tok.back() == ')' || tok.back() == ':' ||
                            tok.back() == ','))
      tok.pop_back();
    while (!tok.empty() && (tok.front() == '(' || tok.front() == '['))
      tok.erase(tok.begin());
    if (tok.size() == 1 && std::isalpha(static_cast<unsigned char>(tok[0])))
      return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0]))));
  }
  return "";
}

bool answers_match(const std::string& predicted, const QARecord& record) {
  const std::string expected = trim(record.answer);
  if (expected.empty()) return false;
  if (!record.options.empty() && expected.size() == 1 &&
      std::isalpha(static_cast<unsigned char>(expected[0]))) {
    const std::string label = normalize_answer_label(predicted);
    return !label.empty() &&
           label[0] == std::toupper(static_cast<unsigned char>(expected[0]));
  }
  return lower(trim(predicted)) == lower(expected);
}

EvalReport run_eval(const std::vector<QARecord>& records, const QuestionRunner& runner,
                    bool strict) {
  if (records.empty()) throw ConfigError("question set is empty");
  EvalReport report;
  report.total = records.size();
  for (const QARecord& record : records) {
    QuestionOutcome outcome;
    outcome.record = record;
    try {
      FinalResponse response = runner(record);
      outcome.predicted = response.answer.answer;
      outcome.confident = response.answer.confidence;
      outcome.forced = response.forced;
      outcome.iterations_used = response.iterations_used;
      outcome.ledger = response.ledger;
      outcome.correct = answers_match(outcome.predicted, record);
    } catch (const Error& e) {
      if (strict) throw;
      outcome.skipped = true;
      outcome.error = e.what();
    }
    report.outcomes.push_back(std::move(outcome));
  }
  for (const QuestionOutcome& o : report.outcomes) {
    if (o.skipped) {
      ++report.skipped;
      continue;
    }
    ++report.answered;
    if (o.correct) ++report.correct;
  }
  report.accuracy = report.answered == 0
                        ? 0.0
                        : static_cast<double>(report.correct) / static_cast<double>(report.answered);
  return report;
}

namespace {

nlohmann::json outcome_to_json(const QuestionOutcome& o) {
  return {{"id", o.record.id},
          {"video_id", o.record.video_id},
          {"expected", o.record.answer},
          {"predicted", o.predicted},
          {"correct", o.correct},
          {"confident", o.confident},
          {"forced", o.forced},
          {"skipped", o.skipped},
          {"iterations_used", o.iterations_used},
          {"logical_reasoning", o.ledger.logical_reasoning},
          {"physical_reasoning", o.ledger.physical_reasoning},
          {"caption_calls", o.ledger.caption_calls},
          {"error", o.error}};
}

}  // namespace

void write_report_json(const std::filesystem::path& path, const EvalReport& report) {
  nlohmann::json outcomes = nlohmann::json::array();
  for (const QuestionOutcome& o : report.outcomes) outcomes.push_back(outcome_to_json(o));
  nlohmann::json doc = {{"summary",
                         {{"total", report.total},
                          {"answered", report.answered},
                          {"correct", report.correct},
                          {"skipped", report.skipped},
                          {"accuracy", report.accuracy}}},
                        {"outcomes", std::move(outcomes)}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write report: " + path.string());
  out << doc.dump(2) << "\n";
}

void write_report_csv(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write report: " + path.string());
  out << "id,video_id,expected,predicted,correct,confident,forced,skipped,iterations_used,"
         "logical_reasoning,physical_reasoning,caption_calls,error\n";
  for (const QuestionOutcome& o : report.outcomes) {
    out << csv_cell(o.record.id) << "," << csv_cell(o.record.video_id) << ","
        << csv_cell(o.record.answer) << "," << csv_cell(o.predicted) << ","
        << (o.correct ? 1 : 0) << "," << (o.confident ? 1 : 0) << "," << (o.forced ? 1 : 0) << ","
        << (o.skipped ? 1 : 0) << "," << o.iterations_used << "," << o.ledger.logical_reasoning
        << "," << o.ledger.physical_reasoning << "," << o.ledger.caption_calls << ","
        << csv_cell(o.error) << "\n";
  }
}

// --- metrics -----------------------------------------------------------------

double shannon_entropy(const std::string& text) {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
  std::istringstream in(lower(text));
  std::string tok;
  while (in >> tok) {
    ++counts[tok];
    ++total;
  }
  if (total == 0) return 0.0;
  double h = 0.0;
  for (const auto& [_, n] : counts) {
    const double p = static_cast<double>(n) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

const char* const kRelevanceSchemaHint =
    "Output exactly one line of the form \"Scoring result: X points\" where X is an integer "
    "between 1 and 5.";

int parse_relevance(const std::string& raw) {
  static const std::string kMarker = "Scoring result";
  std::size_t pos = raw.find(kMarker);
  if (pos == std::string::npos) throw ParseError("relevance reply lacks \"Scoring result\"");
  pos += kMarker.size();
  while (pos < raw.size() && (raw[pos] == ':' || raw[pos] == ' ')) ++pos;
  if (pos >= raw.size() || !std::isdigit(static_cast<unsigned char>(raw[pos])))
    throw ParseError("relevance reply lacks a numeric score");
  char* end = nullptr;
  const long score = std::strtol(raw.c_str() + pos, &end, 10);
  if (score < 1 || score > 5)
    throw ParseError("relevance score " + std::to_string(score) + " outside 1..5");
  return static_cast<int>(score);
}

int relevance_score(const std::string& text, const std::string& question, TextBackend& backend,
                    int max_repairs) {
  return retry_parse<int>([&] { return render_relevance_prompt(text, question); },
                          [](const std::string& raw) { return parse_relevance(raw); }, backend,
                          DecodeParams{}, max_repairs, kRelevanceSchemaHint);
}

std::vector<CurveRow> richness_relevance_curve(const MemoryList& memory,
                                               const std::string& question, TextBackend& backend,
                                               int max_repairs) {
  std::vector<CurveRow> rows;
  for (MemoryLevel level : {MemoryLevel::Coarse, MemoryLevel::Fine, MemoryLevel::UltraFine}) {
    CurveRow row;
    row.level = level;
    double entropy_sum = 0.0;
    double relevance_sum = 0.0;
    for (const MemoryEntry* e : memory.at_level(level)) {
      ++row.entries;
      entropy_sum += shannon_entropy(e->text);
      relevance_sum += relevance_score(e->text, question, backend, max_repairs);
    }
    if (row.entries > 0) {
      row.mean_entropy = entropy_sum / static_cast<double>(row.entries);
      row.mean_relevance = relevance_sum / static_cast<double>(row.entries);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_levels_csv(const std::filesystem::path& path, const std::vector<CurveRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write levels file: " + path.string());
  out << "level,entries,mean_entropy,mean_relevance\n";
  for (const CurveRow& row : rows) {
    out << to_string(row.level) << "," << row.entries << ",";
    if (row.mean_entropy) out << *row.mean_entropy;
    out << ",";
    if (row.mean_relevance) out << *row.mean_relevance;
    out << "\n";
  }
}

// --- needle splicing -----------------------------------------------------------

namespace {

void check_positions(std::int64_t base_duration_s, std::size_t needle_count,
                     const std::vector<std::int64_t>& positions_s) {
  if (positions_s.size() != needle_count)
    throw ConfigError("need exactly one insertion position per needle");
  std::set<std::int64_t> seen;
  for (std::int64_t p : positions_s) {
    if (p < 0 || p > base_duration_s)
      throw ConfigError("insertion position " + std::to_string(p) +
                        " outside the base timeline");
    if (!seen.insert(p).second)
      throw OverlapError("two needles inserted at position " + std::to_string(p));
  }
}

}  // namespace

SpliceResult build_needle_haystack(const WorldSpec& base, const std::vector<NeedleSpec>& needles,
                                   const std::vector<std::int64_t>& positions_s) {
  check_positions(base.duration_s, needles.size(), positions_s);

  // Work in insertion order so offsets accumulate left to right.
  std::vector<std::size_t> order(needles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return positions_s[a] < positions_s[b]; });

  SpliceResult result;
  result.world.video_id = base.video_id + "-needled";
  result.needle_periods.resize(needles.size());

  // Base events shift right by the total length of needles inserted at or
  // before their start. Events straddling an insertion point stay anchored
  // at their start; the overlap with the inserted clip is legal.
  auto shift_of = [&](std::int64_t second) {
    std::int64_t shift = 0;
    for (std::size_t k : order)
      if (positions_s[k] <= second) shift += needles[k].length_s;
    return shift;
  };

  for (const WorldEvent& ev : base.events) {
    WorldEvent moved = ev;
    const std::int64_t shift = shift_of(ev.period.start_s);
    moved.period = TimePeriod{ev.period.start_s + shift, ev.period.end_s + shift};
    moved.micro.clear();
    for (const auto& [second, text] : ev.micro) moved.micro[second + shift] = text;
    result.world.events.push_back(std::move(moved));
  }

  std::int64_t inserted_before = 0;
  std::int64_t total_length = 0;
  for (std::size_t k : order) total_length += needles[k].length_s;
  result.world.duration_s = base.duration_s + total_length;

  for (std::size_t k : order) {
    const NeedleSpec& needle = needles[k];
    const std::int64_t at = positions_s[k] + inserted_before;
    result.needle_periods[k] = TimePeriod{at, at + needle.length_s};

    for (const WorldEvent& ev : needle.events) {
      WorldEvent moved = ev;
      moved.period = TimePeriod{ev.period.start_s + at, ev.period.end_s + at};
      moved.micro.clear();
      for (const auto& [second, text] : ev.micro) moved.micro[second + at] = text;
      result.world.events.push_back(std::move(moved));
    }
    for (const SimQA& qa : needle.qas) {
      SimQA moved = qa;
      moved.video_id = result.world.video_id;
      moved.planted_second = qa.planted_second + at;
      result.qas.push_back(std::move(moved));
    }
    inserted_before += needle.length_s;
  }

  std::sort(result.world.events.begin(), result.world.events.end(),
            [](const WorldEvent& a, const WorldEvent& b) {
              return a.period.start_s < b.period.start_s;
            });
  return result;
}

nlohmann::json make_splice_plan(const std::string& base_source, std::int64_t base_duration_s,
                                const std::vector<std::pair<std::string, std::int64_t>>& needles,
                                const std::vector<std::int64_t>& positions_s) {
  if (base_duration_s <= 0) throw ConfigError("base duration must be positive");
  for (const auto& [source, length] : needles)
    if (length <= 0) throw ConfigError("needle clip " + source + " has a non-positive length");
  check_positions(base_duration_s, needles.size(), positions_s);

  std::vector<std::size_t> order(needles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return positions_s[a] < positions_s[b]; });

  nlohmann::json segments = nlohmann::json::array();
  std::int64_t cursor = 0;
  for (std::size_t k : order) {
    if (positions_s[k] > cursor)
      segments.push_back(
          {{"source", base_source}, {"start_s", cursor}, {"end_s", positions_s[k]}});
    segments.push_back(
        {{"source", needles[k].first}, {"start_s", 0}, {"end_s", needles[k].second}});
    cursor = positions_s[k];
  }
  if (cursor < base_duration_s)
    segments.push_back({{"source", base_source}, {"start_s", cursor}, {"end_s", base_duration_s}});
  return {{"segments", std::move(segments)}};
}

}  // namespace lucy
