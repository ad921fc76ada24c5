#pragma once

#include <cstdint>
#include <string>

#include "lucy/memory_list.hpp"
#include "lucy/time_model.hpp"

namespace lucy {

// Instruction used for every coarse caption; deeper captions get an
// instruction written by the locate-and-instruct agent.
extern const char* const kCoarseCaptionInstruction;

// Marker appended to the answer prompt when the loop is out of iterations
// and the agent must commit to a best guess.
extern const char* const kForcedAnswerAddendum;

// "(0, 200), (400, 600)" in ascending order; "(none)" when empty.
std::string render_excluded_periods(const PeriodSet& excluded);

// Prompt asking for the most relevant `relevant_count` coarse periods, or a
// refusal when the question needs whole-video context. Throws TemplateError
// when question or memory is empty.
std::string render_init_localization_prompt(const MemoryList& memory, const std::string& question,
                                            int relevant_count = 3);

// Prompt asking for the single most relevant unexplored period plus a
// captioning instruction for it. Throws TemplateError when question or
// memory is empty.
std::string render_locate_and_instruct_prompt(const MemoryList& memory,
                                              const std::string& question,
                                              const PeriodSet& explored,
                                              std::int64_t video_duration_s);

// Prompt asking whether the memory suffices to answer; with force=true the
// agent must answer. Throws TemplateError when question or memory is empty.
std::string render_answer_prompt(const MemoryList& memory, const std::string& question,
                                 std::int64_t video_duration_s, bool force);

// 1-to-5 relevance scoring prompt ("Scoring result: X points").
std::string render_relevance_prompt(const std::string& text, const std::string& question);

}  // namespace lucy
