#include "lucy/responses.hpp"

namespace lucy {

namespace {

std::string quote(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string tuple_list(const std::vector<TimePeriod>& periods) {
  std::string out = "[";
  bool first = true;
  for (const TimePeriod& p : periods) {
    if (!first) out += ", ";
    out += "(" + std::to_string(p.start_s) + ", " + std::to_string(p.end_s) + ")";
    first = false;
  }
  out += "]";
  return out;
}

}  // namespace

std::string to_dict_text(const InitLocalizationResponse& r) {
  std::string out = "{\"Flag\": ";
  out += r.flag ? "True" : "False";
  out += ", \"Time Period\": ";
  out += r.flag ? tuple_list(r.periods) : quote("No Time Periods.");
  out += ", \"Reason\": " + quote(r.reason) + "}";
  return out;
}

std::string to_dict_text(const LocateInstructResponse& r) {
  std::string out = "{\"Time Period\": ";
  out += tuple_list({r.period});
  out += ", \"Instruction\": " + quote(r.instruction);
  out += ", \"Reason\": " + quote(r.reason) + "}";
  return out;
}

std::string to_dict_text(const AnswerResponse& r) {
  std::string out = "{\"Confidence\": ";
  out += r.confidence ? "True" : "False";
  out += ", \"Answer\": " + quote(r.confidence ? r.answer : "No Answer");
  out += ", \"Time Period\": ";
  out += r.confidence ? tuple_list(r.periods) : quote("No Time");
  out += ", \"Reason\": " + quote(r.reason) + "}";
  return out;
}

}  // namespace lucy
