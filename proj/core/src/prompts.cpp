#include "lucy/prompts.hpp"

#include "lucy/errors.hpp"

namespace lucy {

const char* const kCoarseCaptionInstruction =
    "Please observe and understand the given video carefully. Describe all the details of this "
    "video as comprehensively as possible in a smooth and coherent passage. Do not omit any "
    "details or prominent information. In addition, if there are any texts, subtitles, text "
    "overlays, or voice-overs in the video, you must explicitly and in detail describe them.";

const char* const kForcedAnswerAddendum =
    "Note: this is the final opportunity to answer. You must now provide your single best guess "
    "answer based solely on the descriptions above, even if you are not fully certain. Set "
    "\"Confidence\" to True, fill in \"Answer\" with your best guess, and fill in \"Time Period\" "
    "with the most relevant time periods.";

namespace {

void require_rendered_inputs(const MemoryList& memory, const std::string& question) {
  if (question.empty()) throw TemplateError("prompt rendering requires a non-empty question");
  if (memory.empty()) throw TemplateError("prompt rendering requires a non-empty memory list");
}

std::string number_word(int n) {
  static const char* words[] = {"zero", "one", "two",   "three", "four", "five",
                                "six",  "seven", "eight", "nine",  "ten"};
  if (n >= 0 && n <= 10) return words[n];
  return std::to_string(n);
}

}  // namespace

std::string render_excluded_periods(const PeriodSet& excluded) {
  if (excluded.empty()) return "(none)";
  std::string out;
  bool first = true;
  for (const TimePeriod& p : excluded) {
    if (!first) out += ", ";
    out += "(" + std::to_string(p.start_s) + ", " + std::to_string(p.end_s) + ")";
    first = false;
  }
  return out;
}

std::string render_init_localization_prompt(const MemoryList& memory, const std::string& question,
                                            int relevant_count) {
  require_rendered_inputs(memory, question);
  const std::string n = number_word(relevant_count);
  std::string p;
  p += "The following provides a rough description of what's shown in the video during different "
       "time periods:\n\n";
  p += render_for_prompt(memory);
  p += "\n\nNow, a question has been raised regarding this video.\n\n";
  p += question;
  p += "\n\nPlease read the given video content descriptions and the question in depth.\n\n";
  p += "Since most of these descriptions are rather rough and some detailed information is lost, "
       "my task is to try my best to find the time periods related to the given question, and "
       "then provide more detailed descriptions of the video content of these time periods.\n\n";
  p += "In order to assist me in completing my task, your task is to:\n\n";
  p += "Based on the provided rough video descriptions, determine whether the given question "
       "allows me to provide a more confident answer by further observing the video content of " +
       n + " time periods.\n\n";
  p += "If so, you should find out the time periods related to the question as much as possible "
       "and provide these relevant time periods so that I can review the content information of "
       "these video segments again to obtain more information and answer the question better.\n\n";
  p += "For example, since there is no need for an overall understanding of large video segments, "
       "the following questions can obtain more accurate answers by re-observing the video "
       "segments of " +
       n + " time periods:\n\n";
  p += "(i) What color is Putin's tie between the interview with Antony Blinkoen and interview "
       "with Marie Yovanovitch?\n\n";
  p += "(ii) How does the goalkeeper prevent Liverpool's shot from scoring at 81:38 in the "
       "video?\n\n";
  p += "(iii) Who smashes the magic mirror?\n\n";
  p += "On the contrary, for example, because an overall understanding of large video segments is "
       "required, it is difficult to obtain more accurate answers to the following questions by "
       "merely observing two video segments:\n\n";
  p += "(i) What happens in the second half of the game?\n\n";
  p += "(ii) What is the video about?\n\n";
  p += "(iii) Which places has the protagonist of this video been to in total?\n\n";
  p += "You should output in a strictly standardized dictionary format containing three key-value "
       "pairs:\n\n";
  p += "\"Flag\": A bool. If you are very confident that you can provide the time periods "
       "according to the above requirements, set it as True. Otherwise, set it as False.\n\n";
  p += "\"Time Period\": A list. If \"Flag\" is True, fill in the list with the most relevant " +
       n +
       " time periods, in the tuple format (start time, end time). If \"Flag\" is False, fill in "
       "\"No Time Periods.\"\n\n";
  p += "\"Reason\": A String. Show me your reasons for the time periods you provided.";
  return p;
}

std::string render_locate_and_instruct_prompt(const MemoryList& memory,
                                              const std::string& question,
                                              const PeriodSet& explored,
                                              std::int64_t video_duration_s) {
  require_rendered_inputs(memory, question);
  std::string p;
  p += "There is currently a video with a total duration of " +
       std::to_string(video_duration_s) + " seconds.\n\n";
  p += "The following gives a general description of what is shown in the video during certain "
       "time periods:\n\n";
  p += render_for_prompt(memory);
  p += "\n\nNow, a question has been raised regarding this video.\n\n";
  p += question;
  p += "\n\nPlease read the given video content descriptions and the question in depth.\n\n";
  p += "You do not need to answer this question.\n\n";
  p += "Your first task is to identify, based on the video content in each time period, the "
       "single time period that is most relevant to the question and that you think requires "
       "further elaboration of its video content details to make the answer to this question "
       "more explicit.\n\n";
  p += "Notably, you need to select the most relevant one from the time periods other than the "
       "following time periods:\n\n";
  p += render_excluded_periods(explored);
  p += "\n\nIn addition, assume there is now a caption model that can describe a given video "
       "according to your instruction.\n\n";
  p += "Your second task is to consider what detailed content in the video of the time period "
       "you have selected you want the model to focus on describing, and provide your "
       "instruction.\n\n";
  p += "For example, assume that the entire video segment is about an offensive play in a "
       "certain football game, and you want to focus on the passing situation of the football "
       "during this offensive play. The instruction you give to the model could be:\n\n";
  p += "Please observe all the details in this video very carefully and provide a detailed and "
       "objective description of what is shown in the video. If this video is about an offensive "
       "play in a football match, you should focus particularly on the passing situation of the "
       "football during this offensive play.\n\n";
  p += "Note that you should organize your instruction by referring to the language expressions "
       "in the above example.\n\n";
  p += "You should output in a strictly standardized dictionary format containing three "
       "key-value pairs:\n\n";
  p += "\"Time Period\": A list. Fill with the single most relevant period, in the tuple format "
       "(start time, end time).\n\n";
  p += "\"Instruction\": A String. This string must be enclosed in double quotes. Show me the "
       "instruction you want to give to the caption model for the second task.\n\n";
  p += "\"Reason\": A String. This string must be enclosed in double quotes. Show me your "
       "reasons for the time period and instruction you provided.";
  return p;
}

std::string render_answer_prompt(const MemoryList& memory, const std::string& question,
                                 std::int64_t video_duration_s, bool force) {
  require_rendered_inputs(memory, question);
  std::string p;
  p += "There is currently a video with a total duration of " +
       std::to_string(video_duration_s) + " seconds.\n\n";
  p += "The following gives a general description of what is shown in the video during certain "
       "time periods:\n\n";
  p += render_for_prompt(memory);
  p += "\n\nNow, a question has been raised regarding the content descriptions of this "
       "video.\n\n";
  p += question;
  p += "\n\nPlease read the given video content descriptions and the question in depth, and "
       "determine whether you can accurately answer the given question solely based on the "
       "currently provided descriptions.\n\n";
  p += "If you can answer it with absolute confidence, please answer this question and provide "
       "the time periods of the video content you are referring to. The answer you provide must "
       "have completely and absolutely objective support in the video descriptions. Do not make "
       "inferences arbitrarily.\n\n";
  p += "If you think the current content descriptions of the video are still insufficient to "
       "accurately answer the question, please do not answer it and give me your reason.\n\n";
  p += "Please output in a strictly standardized dictionary format containing four key-value "
       "pairs:\n\n";
  p += "\"Confidence\": A boolean value. Set it to True if you are certain about the answer, and "
       "False if not.\n\n";
  p += "\"Answer\": A string. This string must be enclosed in double quotes. When \"Confidence\" "
       "is True, fill in the answer content; when \"Confidence\" is False, fill in \"No "
       "Answer\".\n\n";
  p += "\"Time Period\": A list. When \"Confidence\" is True, fill in the list with time periods "
       "corresponding to the answer, each in the format of a tuple (start time, end time); when "
       "\"Confidence\" is False, fill in \"No Time\".\n\n";
  p += "\"Reason\": A String. This string must be enclosed in double quotes. Show me your "
       "reasoning about your judgment. You need to ensure and check that your reasoning must be "
       "able to absolutely support your answer.";
  if (force) {
    p += "\n\n";
    p += kForcedAnswerAddendum;
  }
  return p;
}

std::string render_relevance_prompt(const std::string& text, const std::string& question) {
  if (text.empty()) throw TemplateError("relevance prompt requires a non-empty text");
  if (question.empty()) throw TemplateError("relevance prompt requires a non-empty question");
  std::string p;
  p += "Please complete the following task:\n";
  p += "Carefully analyze the given Text and Question.\n";
  p += "Determine whether the Text contains descriptions or information relevant to the "
       "Question. Score the relevance on a scale of 1 to 5 based on the following criteria:\n";
  p += "1 point: The Text has no relevance to the Question, and there is no content related to "
       "the Question in the Text at all.\n";
  p += "2 points: The Text has a very weak relevance to the Question, with only a minimal amount "
       "of unrelated indirect descriptions.\n";
  p += "3 points: The Text has some relevance to the Question, containing some relevant "
       "information, but it is not comprehensive or in-depth enough.\n";
  p += "4 points: The Text has a relatively strong relevance to the Question, containing a "
       "substantial amount of relevant information and being able to respond to the Question "
       "fairly well.\n";
  p += "5 points: The Text is highly relevant to the Question, fully and thoroughly covering all "
       "the key information required by the Question.\n";
  p += "Output the final score in the format of \"Scoring result: X points\", where X is an "
       "integer between 1 and 5.\n";
  p += "Given Text: " + text + "\n";
  p += "Given Question: " + question;
  return p;
}

}  // namespace lucy
