#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lucy/backend.hpp"
#include "lucy/errors.hpp"
#include "lucy/responses.hpp"
#include "lucy/time_model.hpp"

namespace lucy {

// Generic value tree for the dictionary-literal dialect the agents emit:
// Python-style dicts with True/False, tuples, lists, and quoted strings.
struct DictValue;
using ValueSeq = std::vector<DictValue>;
using ValueMap = std::vector<std::pair<std::string, DictValue>>;

struct DictValue {
  std::variant<std::nullptr_t, bool, double, std::string, ValueSeq, ValueMap> v;

  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_number() const { return std::holds_alternative<double>(v); }
  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_seq() const { return std::holds_alternative<ValueSeq>(v); }
  bool is_map() const { return std::holds_alternative<ValueMap>(v); }
};

// Scans raw agent output (prose and code fences tolerated) for the first
// balanced, well-formed dictionary literal. nullopt when none parses.
std::optional<ValueMap> extract_first_dict(const std::string& raw);

const DictValue* map_get(const ValueMap& map, std::string_view key);

// --- response parsers ------------------------------------------------------
//
// `candidates` is the set of periods the agent was allowed to pick from
// (sorted by start). Proposed (start, end) pairs are clamped to the covered
// range and snapped to the candidate with maximal overlap, earliest on
// ties; a pair overlapping nothing raises OutOfRangeError.

InitLocalizationResponse parse_init_localization(const std::string& raw,
                                                 const std::vector<TimePeriod>& candidates);

LocateInstructResponse parse_locate_and_instruct(const std::string& raw,
                                                 const std::vector<TimePeriod>& candidates);

// No snapping: evidence periods are reported verbatim. Inconsistent fields
// are repaired when the repair is unambiguous (an unconfident answer with
// text demotes the text into the reason), otherwise ParseError.
AnswerResponse parse_answer(const std::string& raw);

// Schema reminders quoted back to the agent on a repair retry.
extern const char* const kInitLocalizationSchemaHint;
extern const char* const kLocateInstructSchemaHint;
extern const char* const kAnswerSchemaHint;

// One backend attempt inside retry_parse, reported to the observer so the
// engine can trace every physical call.
struct ParseAttempt {
  std::string prompt;
  std::string raw;
  bool ok = false;
  std::string error;
};

using AttemptObserver = std::function<void(const ParseAttempt&)>;

// Runs render -> complete -> parse, re-prompting on ParseError with the
// malformed output and the schema hint appended. At most 1 + max_repairs
// backend calls; the last ParseError is rethrown when the budget is spent.
template <typename T>
T retry_parse(const std::function<std::string()>& render,
              const std::function<T(const std::string&)>& parse, TextBackend& backend,
              const DecodeParams& decode, int max_repairs, std::string_view schema_hint,
              const AttemptObserver& observer = {});

// Prompt suffix used for attempt n+1 after attempt n produced `raw`.
std::string render_repair_suffix(const std::string& raw, const std::string& error,
                                 std::string_view schema_hint);

// --- template implementation -----------------------------------------------

template <typename T>
T retry_parse(const std::function<std::string()>& render,
              const std::function<T(const std::string&)>& parse, TextBackend& backend,
              const DecodeParams& decode, int max_repairs, std::string_view schema_hint,
              const AttemptObserver& observer) {
  const std::string base_prompt = render();
  std::string prompt = base_prompt;
  for (int attempt = 0;; ++attempt) {
    const std::string raw = backend.complete(prompt, decode);
    try {
      T value = parse(raw);
      if (observer) observer(ParseAttempt{prompt, raw, true, ""});
      return value;
    } catch (const ParseError& e) {
      if (observer) observer(ParseAttempt{prompt, raw, false, e.what()});
      if (attempt >= max_repairs) throw;
      prompt = base_prompt + "\n\n" + render_repair_suffix(raw, e.what(), schema_hint);
    }
  }
}

}  // namespace lucy
