#include "lucy/parse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace lucy {

const char* const kInitLocalizationSchemaHint =
    "{\"Flag\": True or False, \"Time Period\": [(start time, end time), ...] or \"No Time "
    "Periods.\", \"Reason\": \"...\"}";
const char* const kLocateInstructSchemaHint =
    "{\"Time Period\": [(start time, end time)], \"Instruction\": \"...\", \"Reason\": \"...\"}";
const char* const kAnswerSchemaHint =
    "{\"Confidence\": True or False, \"Answer\": \"...\" or \"No Answer\", \"Time Period\": "
    "[(start time, end time), ...] or \"No Time\", \"Reason\": \"...\"}";

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;

  bool done() const { return i >= s.size(); }
  char peek() const { return s[i]; }

  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  bool consume(char c) {
    if (!done() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
};

bool parse_value(Cursor& c, DictValue& out);

bool parse_quoted_string(Cursor& c, std::string& out) {
  const char open = c.peek();
  if (open != '"' && open != '\'') return false;
  ++c.i;
  out.clear();
  while (!c.done()) {
    const char ch = c.s[c.i];
    if (ch == '\\') {
      if (c.i + 1 >= c.s.size()) return false;
      const char esc = c.s[c.i + 1];
      switch (esc) {
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        default: out += esc;
      }
      c.i += 2;
      continue;
    }
    if (ch == open) {
      ++c.i;
      return true;
    }
    out += ch;
    ++c.i;
  }
  return false;
}

bool parse_bare_word(Cursor& c, DictValue& out) {
  std::size_t j = c.i;
  while (j < c.s.size() &&
         (std::isalnum(static_cast<unsigned char>(c.s[j])) || c.s[j] == '_')) {
    ++j;
  }
  if (j == c.i) return false;
  const std::string word = c.s.substr(c.i, j - c.i);
  if (word == "True" || word == "true" || word == "TRUE") {
    out.v = true;
  } else if (word == "False" || word == "false" || word == "FALSE") {
    out.v = false;
  } else if (word == "None" || word == "null" || word == "Null") {
    out.v = nullptr;
  } else {
    return false;
  }
  c.i = j;
  return true;
}

bool parse_number(Cursor& c, DictValue& out) {
  const char* begin = c.s.c_str() + c.i;
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin) return false;
  c.i += static_cast<std::size_t>(end - begin);
  out.v = value;
  return true;
}

bool parse_seq(Cursor& c, char open, char close, DictValue& out) {
  if (!c.consume(open)) return false;
  ValueSeq seq;
  c.skip_ws();
  if (c.consume(close)) {
    out.v = std::move(seq);
    return true;
  }
  while (true) {
    DictValue item;
    if (!parse_value(c, item)) return false;
    seq.push_back(std::move(item));
    c.skip_ws();
    if (c.consume(close)) break;
    if (!c.consume(',')) return false;
    c.skip_ws();
    if (c.consume(close)) break;  // trailing comma
  }
  out.v = std::move(seq);
  return true;
}

bool parse_key(Cursor& c, std::string& key) {
  c.skip_ws();
  if (c.done()) return false;
  if (c.peek() == '"' || c.peek() == '\'') return parse_quoted_string(c, key);
  std::size_t j = c.i;
  while (j < c.s.size() && (std::isalnum(static_cast<unsigned char>(c.s[j])) || c.s[j] == '_' ||
                            c.s[j] == ' ')) {
    ++j;
  }
  if (j == c.i) return false;
  key = c.s.substr(c.i, j - c.i);
  while (!key.empty() && key.back() == ' ') key.pop_back();
  if (key.empty()) return false;
  c.i = j;
  return true;
}

bool parse_map(Cursor& c, DictValue& out) {
  if (!c.consume('{')) return false;
  ValueMap map;
  c.skip_ws();
  if (c.consume('}')) {
    out.v = std::move(map);
    return true;
  }
  while (true) {
    std::string key;
    if (!parse_key(c, key)) return false;
    c.skip_ws();
    if (!c.consume(':')) return false;
    c.skip_ws();
    DictValue value;
    if (!parse_value(c, value)) return false;
    map.emplace_back(std::move(key), std::move(value));
    c.skip_ws();
    if (c.consume('}')) break;
    if (!c.consume(',')) return false;
    c.skip_ws();
    if (c.consume('}')) break;  // trailing comma
  }
  out.v = std::move(map);
  return true;
}

bool parse_value(Cursor& c, DictValue& out) {
  c.skip_ws();
  if (c.done()) return false;
  const char ch = c.peek();
  if (ch == '{') return parse_map(c, out);
  if (ch == '[') return parse_seq(c, '[', ']', out);
  if (ch == '(') return parse_seq(c, '(', ')', out);
  if (ch == '"' || ch == '\'') {
    std::string s;
    if (!parse_quoted_string(c, s)) return false;
    out.v = std::move(s);
    return true;
  }
  if (ch == '-' || ch == '+' || std::isdigit(static_cast<unsigned char>(ch))) {
    return parse_number(c, out);
  }
  return parse_bare_word(c, out);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool is_no_time_string(const DictValue& v) {
  if (!v.is_string()) return false;
  const std::string lowered = lowercase(std::get<std::string>(v.v));
  return lowered.rfind("no time", 0) == 0;
}

std::int64_t to_seconds(const DictValue& v) {
  if (!v.is_number()) throw ParseError("expected a numeric time value");
  return static_cast<std::int64_t>(std::llround(std::get<double>(v.v)));
}

// Accepts [(a, b), ...] and the flat single-tuple form (a, b).
std::vector<std::pair<std::int64_t, std::int64_t>> raw_periods(const DictValue& v) {
  if (!v.is_seq()) throw ParseError("\"Time Period\" must be a list of (start, end) tuples");
  const ValueSeq& seq = std::get<ValueSeq>(v.v);
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  if (seq.size() == 2 && seq[0].is_number() && seq[1].is_number()) {
    out.emplace_back(to_seconds(seq[0]), to_seconds(seq[1]));
    return out;
  }
  for (const DictValue& item : seq) {
    if (!item.is_seq()) throw ParseError("each time period must be a (start, end) tuple");
    const ValueSeq& tup = std::get<ValueSeq>(item.v);
    if (tup.size() != 2) throw ParseError("each time period must have exactly two values");
    out.emplace_back(to_seconds(tup[0]), to_seconds(tup[1]));
  }
  return out;
}

std::vector<TimePeriod> snap_periods(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& raw,
    const std::vector<TimePeriod>& candidates) {
  if (candidates.empty()) throw OutOfRangeError("no candidate periods to snap onto");
  const std::int64_t max_end = candidates.back().end_s;
  std::vector<TimePeriod> out;
  for (const auto& [s0, e0] : raw) {
    const std::int64_t s = std::clamp<std::int64_t>(s0, 0, max_end);
    const std::int64_t e = std::clamp<std::int64_t>(e0, 0, max_end);
    if (s >= e) {
      throw ParseError("time period (" + std::to_string(s0) + ", " + std::to_string(e0) +
                       ") is empty after clamping");
    }
    const TimePeriod snapped = snap_to_candidates(s, e, candidates);
    if (std::find(out.begin(), out.end(), snapped) == out.end()) out.push_back(snapped);
  }
  return out;
}

bool read_bool(const DictValue& v, const char* key) {
  if (v.is_bool()) return std::get<bool>(v.v);
  if (v.is_string()) {
    const std::string lowered = lowercase(std::get<std::string>(v.v));
    if (lowered == "true") return true;
    if (lowered == "false") return false;
  }
  throw ParseError(std::string("\"") + key + "\" must be a boolean");
}

std::string read_string(const ValueMap& map, const char* key, bool required) {
  const DictValue* v = map_get(map, key);
  if (!v) {
    if (required) throw ParseError(std::string("missing \"") + key + "\" key");
    return "";
  }
  if (!v->is_string()) {
    if (required) throw ParseError(std::string("\"") + key + "\" must be a string");
    return "";
  }
  return std::get<std::string>(v->v);
}

}  // namespace

std::optional<ValueMap> extract_first_dict(const std::string& raw) {
  for (std::size_t i = raw.find('{'); i != std::string::npos; i = raw.find('{', i + 1)) {
    Cursor c{raw, i};
    DictValue value;
    if (parse_map(c, value) && value.is_map()) {
      return std::get<ValueMap>(std::move(value.v));
    }
  }
  return std::nullopt;
}

const DictValue* map_get(const ValueMap& map, std::string_view key) {
  for (const auto& [k, v] : map) {
    if (k == key) return &v;
  }
  return nullptr;
}

InitLocalizationResponse parse_init_localization(const std::string& raw,
                                                 const std::vector<TimePeriod>& candidates) {
  const auto dict = extract_first_dict(raw);
  if (!dict) throw ParseError("no well-formed dictionary found in localization output");
  const DictValue* flag_v = map_get(*dict, "Flag");
  if (!flag_v) throw ParseError("missing \"Flag\" key");
  const DictValue* periods_v = map_get(*dict, "Time Period");
  if (!periods_v) throw ParseError("missing \"Time Period\" key");

  InitLocalizationResponse out;
  out.flag = read_bool(*flag_v, "Flag");
  out.reason = read_string(*dict, "Reason", false);

  if (!out.flag || is_no_time_string(*periods_v)) {
    out.flag = false;
    out.periods.clear();
    return out;
  }
  out.periods = snap_periods(raw_periods(*periods_v), candidates);
  if (out.periods.empty()) {
    throw ParseError("\"Flag\" is True but no usable time period was given");
  }
  return out;
}

LocateInstructResponse parse_locate_and_instruct(const std::string& raw,
                                                 const std::vector<TimePeriod>& candidates) {
  const auto dict = extract_first_dict(raw);
  if (!dict) throw ParseError("no well-formed dictionary found in locate output");
  const DictValue* periods_v = map_get(*dict, "Time Period");
  if (!periods_v) throw ParseError("missing \"Time Period\" key");
  const auto raw_list = raw_periods(*periods_v);
  if (raw_list.size() != 1) {
    throw ParseError("expected a single time period, got " + std::to_string(raw_list.size()));
  }
  LocateInstructResponse out;
  out.period = snap_periods(raw_list, candidates).front();
  out.instruction = read_string(*dict, "Instruction", true);
  if (out.instruction.empty()) throw ParseError("\"Instruction\" must be a non-empty string");
  out.reason = read_string(*dict, "Reason", false);
  return out;
}

AnswerResponse parse_answer(const std::string& raw) {
  const auto dict = extract_first_dict(raw);
  if (!dict) throw ParseError("no well-formed dictionary found in answer output");
  const DictValue* conf_v = map_get(*dict, "Confidence");
  if (!conf_v) throw ParseError("missing \"Confidence\" key");

  AnswerResponse out;
  out.confidence = read_bool(*conf_v, "Confidence");
  out.answer = read_string(*dict, "Answer", out.confidence);
  out.reason = read_string(*dict, "Reason", false);

  const DictValue* periods_v = map_get(*dict, "Time Period");
  if (out.confidence) {
    if (out.answer.empty() || lowercase(out.answer) == "no answer") {
      throw ParseError("confident answer must carry answer text");
    }
    if (!periods_v || is_no_time_string(*periods_v)) {
      throw ParseError("confident answer must carry evidence time periods");
    }
    for (const auto& [s, e] : raw_periods(*periods_v)) {
      if (s < 0 || s >= e) {
        throw ParseError("evidence period (" + std::to_string(s) + ", " + std::to_string(e) +
                         ") is not a valid interval");
      }
      out.periods.push_back(TimePeriod{s, e});
    }
    if (out.periods.empty()) {
      throw ParseError("confident answer must carry evidence time periods");
    }
    return out;
  }

  // Unconfident: normalize the record, demoting stray answer text into the
  // reason rather than losing it.
  if (!out.answer.empty() && lowercase(out.answer) != "no answer") {
    out.reason = out.reason.empty()
                     ? "unconfident draft answer: " + out.answer
                     : out.reason + " (unconfident draft answer: " + out.answer + ")";
  }
  out.answer = "No Answer";
  out.periods.clear();
  return out;
}

std::string render_repair_suffix(const std::string& raw, const std::string& error,
                                 std::string_view schema_hint) {
  static constexpr std::size_t kQuoteCap = 2000;
  std::string quoted = raw.substr(0, kQuoteCap);
  if (raw.size() > kQuoteCap) quoted += " [...]";
  std::string out;
  out += "Your previous output could not be parsed (";
  out += error;
  out += "). The previous output was:\n\n";
  out += quoted;
  out += "\n\nRespond again. Output only one dictionary in exactly this format, with no extra "
         "commentary:\n\n";
  out += schema_hint;
  return out;
}

}  // namespace lucy
