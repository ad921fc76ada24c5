#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lucy/backend.hpp"
#include "lucy/engine.hpp"
#include "lucy/sim_world.hpp"
#include "lucy/time_model.hpp"

namespace lucy {

// One benchmark question. `answer` holds the expected option label ("B") for
// multiple choice, or the expected answer text for open questions.
struct QARecord {
  std::string id;
  std::string video_id;
  std::string stem;
  std::vector<std::string> options;
  std::string answer;

  bool operator==(const QARecord&) const = default;
};

std::vector<QARecord> qa_records_from_json(const nlohmann::json& j);
nlohmann::json qa_records_to_json(const std::vector<QARecord>& records);
QARecord qa_record_from_sim(const SimQA& qa);

// Question text handed to the pipeline: the stem, then one "A. ..." line per
// option.
std::string render_question(const std::string& stem, const std::vector<std::string>& options);

// First standalone single-letter token of an answer, uppercased ("b) " -> "B").
// Empty when the text carries no such label.
std::string normalize_answer_label(const std::string& text);

bool answers_match(const std::string& predicted, const QARecord& record);

struct QuestionOutcome {
  QARecord record;
  std::string predicted;
  bool correct = false;
  bool confident = false;
  bool forced = false;
  bool skipped = false;
  int iterations_used = 0;
  CallLedger ledger;
  std::string error;
};

struct EvalReport {
  std::vector<QuestionOutcome> outcomes;
  std::size_t total = 0;
  std::size_t answered = 0;  // total minus skipped
  std::size_t correct = 0;
  std::size_t skipped = 0;
  double accuracy = 0.0;  // correct / answered
};

using QuestionRunner = std::function<FinalResponse(const QARecord&)>;

// Runs every record through `runner`. A runner failure fails the whole eval
// when `strict`, otherwise the record is skipped and drops out of the
// accuracy denominator.
EvalReport run_eval(const std::vector<QARecord>& records, const QuestionRunner& runner,
                    bool strict);

void write_report_json(const std::filesystem::path& path, const EvalReport& report);
void write_report_csv(const std::filesystem::path& path, const EvalReport& report);

// --- memory quality metrics --------------------------------------------------

// Shannon entropy in bits over the lowercased whitespace-token distribution.
// Empty or blank text has zero entropy.
double shannon_entropy(const std::string& text);

// "Scoring result: X points" with X in 1..5; anything else is a ParseError.
int parse_relevance(const std::string& raw);

extern const char* const kRelevanceSchemaHint;

// Asks the reasoning backend to grade how relevant `text` is to `question`,
// with the usual repair retries.
int relevance_score(const std::string& text, const std::string& question, TextBackend& backend,
                    int max_repairs = 2);

// Per-level aggregate. Levels with no entries keep null metrics so a missing
// tier is visible instead of silently averaged away.
struct CurveRow {
  MemoryLevel level = MemoryLevel::Coarse;
  std::size_t entries = 0;
  std::optional<double> mean_entropy;
  std::optional<double> mean_relevance;
};

std::vector<CurveRow> richness_relevance_curve(const MemoryList& memory,
                                               const std::string& question, TextBackend& backend,
                                               int max_repairs = 2);

void write_levels_csv(const std::filesystem::path& path, const std::vector<CurveRow>& rows);

// --- needle splicing ----------------------------------------------------------

struct SpliceResult {
  WorldSpec world;
  std::vector<SimQA> qas;                 // planted seconds shifted to the spliced timeline
  std::vector<TimePeriod> needle_periods; // where each needle landed, input order
};

// Inserts each needle at its base-timeline position (position i for needle i).
// Base events at or after an insertion point shift right; positions must be
// unique and inside [0, base.duration_s], else OverlapError / ConfigError.
SpliceResult build_needle_haystack(const WorldSpec& base, const std::vector<NeedleSpec>& needles,
                                   const std::vector<std::int64_t>& positions_s);

// The same splice as a decoder cut list for real media:
// {"segments": [{"source", "start_s", "end_s"}, ...]} alternating base spans
// and whole needle clips. Needle clips are (source, length_s) pairs.
nlohmann::json make_splice_plan(const std::string& base_source, std::int64_t base_duration_s,
                                const std::vector<std::pair<std::string, std::int64_t>>& needles,
                                const std::vector<std::int64_t>& positions_s);

}  // namespace lucy
