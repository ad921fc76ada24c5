#pragma once

#include <string>
#include <vector>

#include "lucy/time_model.hpp"

namespace lucy {

// Outcome of the sparse-initialization localization call. flag=false means
// the question needs whole-video context and no periods are proposed.
struct InitLocalizationResponse {
  bool flag = false;
  std::vector<TimePeriod> periods;
  std::string reason;

  bool operator==(const InitLocalizationResponse&) const = default;
};

// Outcome of the merged locate-and-instruct call: the single period to
// explore next and the captioning instruction for it.
struct LocateInstructResponse {
  TimePeriod period;
  std::string instruction;
  std::string reason;

  bool operator==(const LocateInstructResponse&) const = default;
};

// Outcome of the answering call. confidence=false implies answer
// "No Answer" and no evidence periods.
struct AnswerResponse {
  bool confidence = false;
  std::string answer = "No Answer";
  std::vector<TimePeriod> periods;
  std::string reason;

  bool operator==(const AnswerResponse&) const = default;
};

// Canonical dictionary-literal renderings, matching what the prompts ask
// the agents to emit. Used by the scripted agents and by round-trip tests.
std::string to_dict_text(const InitLocalizationResponse& r);
std::string to_dict_text(const LocateInstructResponse& r);
std::string to_dict_text(const AnswerResponse& r);

}  // namespace lucy
