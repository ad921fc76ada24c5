#include "lucy/sim_world.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lucy/errors.hpp"
#include "lucy/responses.hpp"

namespace lucy {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::set<std::string> token_set(const std::string& text) {
  std::set<std::string> out;
  std::istringstream in(lower(text));
  std::string tok;
  while (in >> tok) out.insert(tok);
  return out;
}

}  // namespace

std::vector<std::string> tokenize_distinct(const std::string& text) {
  std::set<std::string> s = token_set(text);
  return {s.begin(), s.end()};
}

std::size_t token_overlap(const std::string& a, const std::string& b) {
  std::set<std::string> sa = token_set(a);
  std::set<std::string> sb = token_set(b);
  std::size_t n = 0;
  for (const std::string& t : sa) n += sb.count(t);
  return n;
}

std::vector<PromptBlock> parse_prompt_blocks(const std::string& prompt) {
  // Recovers lines of the form "[12 s – 24 s] (fine): text".
  static const std::string kDash = " s \xE2\x80\x93 ";
  std::vector<PromptBlock> blocks;
  std::size_t pos = 0;
  while (pos <= prompt.size()) {
    std::size_t eol = prompt.find('\n', pos);
    std::string line = prompt.substr(pos, eol == std::string::npos ? eol : eol - pos);
    pos = eol == std::string::npos ? prompt.size() + 1 : eol + 1;
    if (line.empty() || line[0] != '[') continue;

    std::size_t dash = line.find(kDash);
    if (dash == std::string::npos) continue;
    std::size_t close = line.find(" s] (", dash + kDash.size());
    if (close == std::string::npos) continue;
    std::size_t paren = line.find("): ", close + 5);
    if (paren == std::string::npos) continue;

    errno = 0;
    char* endp = nullptr;
    long long start = std::strtoll(line.c_str() + 1, &endp, 10);
    if (endp != line.c_str() + dash) continue;
    long long end = std::strtoll(line.c_str() + dash + kDash.size(), &endp, 10);
    if (endp != line.c_str() + close) continue;

    std::string level_name = line.substr(close + 5, paren - (close + 5));
    std::optional<MemoryLevel> level = level_from_string(level_name);
    if (!level) continue;

    PromptBlock b;
    b.period = TimePeriod{start, end};
    b.level = *level;
    b.text = line.substr(paren + 3);
    if (!b.period.valid()) continue;
    blocks.push_back(std::move(b));
  }
  return blocks;
}

namespace {

constexpr const char* kQuestionMarker = "a question has been raised regarding";
constexpr const char* kExcludedMarker = "other than the following time periods:\n\n";
constexpr const char* kFocusMarker = "focus particularly on";

// The question paragraph sits between blank lines right after the marker
// sentence. Option lines inside it are separated by single newlines.
std::string extract_question(const std::string& prompt) {
  std::size_t m = prompt.find(kQuestionMarker);
  if (m == std::string::npos) return "";
  std::size_t start = prompt.find("\n\n", m);
  if (start == std::string::npos) return "";
  start += 2;
  std::size_t end = prompt.find("\n\n", start);
  if (end == std::string::npos) end = prompt.size();
  return trim(prompt.substr(start, end - start));
}

PeriodSet extract_excluded(const std::string& prompt) {
  PeriodSet out;
  std::size_t m = prompt.find(kExcludedMarker);
  if (m == std::string::npos) return out;
  std::size_t start = m + std::string(kExcludedMarker).size();
  std::size_t end = prompt.find("\n\n", start);
  if (end == std::string::npos) end = prompt.size();
  std::string region = prompt.substr(start, end - start);
  std::size_t pos = 0;
  while ((pos = region.find('(', pos)) != std::string::npos) {
    char* endp = nullptr;
    long long a = std::strtoll(region.c_str() + pos + 1, &endp, 10);
    if (endp == region.c_str() + pos + 1) {
      ++pos;
      continue;
    }
    while (*endp == ',' || *endp == ' ') ++endp;
    char* endp2 = nullptr;
    long long b = std::strtoll(endp, &endp2, 10);
    if (endp2 == endp) {
      ++pos;
      continue;
    }
    out.insert(TimePeriod{a, b});
    pos = static_cast<std::size_t>(endp2 - region.c_str());
  }
  return out;
}

struct ParsedQuestion {
  std::string stem;
  std::vector<std::pair<char, std::string>> options;
};

ParsedQuestion split_question(const std::string& question) {
  ParsedQuestion q;
  std::istringstream in(question);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (!first && line.size() > 3 && line[0] >= 'A' && line[0] <= 'Z' && line[1] == '.' &&
        line[2] == ' ') {
      q.options.emplace_back(line[0], line.substr(3));
    } else if (first) {
      q.stem = line;
      first = false;
    } else {
      q.stem += " " + line;
    }
  }
  return q;
}

// For question stems shaped "During the <event>, ..." the part after the
// first comma is what the asker actually wants observed.
std::string question_core(const std::string& stem) {
  if (lower(stem).rfind("during", 0) == 0) {
    std::size_t comma = stem.find(", ");
    if (comma != std::string::npos) return stem.substr(comma + 2);
  }
  return stem;
}

// True when every token of `needle_text` occurs in `haystack_tokens`.
bool all_tokens_present(const std::string& needle_text, const std::set<std::string>& haystack) {
  std::set<std::string> need = token_set(needle_text);
  if (need.empty()) return false;
  for (const std::string& t : need)
    if (!haystack.count(t)) return false;
  return true;
}

}  // namespace

// --- ScriptedCaptioner ------------------------------------------------------

ScriptedCaptioner::ScriptedCaptioner(WorldSpec world, ScopeConfig scope)
    : world_(std::move(world)), scope_(scope) {
  scope_.validate();
}

std::string ScriptedCaptioner::do_caption(const ClipRequest& request) {
  const TimePeriod clip = request.period;
  if (!clip.valid()) throw CaptionError("invalid clip period", clip.start_s, clip.end_s);
  const std::int64_t dur = clip.duration_s();

  std::vector<std::string> parts;
  if (dur > scope_.t_fine_s) {
    for (const WorldEvent& ev : world_.events)
      if (overlap_s(ev.period, clip) > 0) parts.push_back(ev.summary);
  } else if (dur > scope_.t_ultrafine_s) {
    for (const WorldEvent& ev : world_.events)
      if (overlap_s(ev.period, clip) > 0) parts.push_back(ev.detail);
  } else {
    for (std::int64_t s = clip.start_s; s < clip.end_s; ++s)
      for (const WorldEvent& ev : world_.events) {
        auto it = ev.micro.find(s);
        if (it != ev.micro.end()) parts.push_back(it->second);
      }
  }

  std::string text;
  for (const std::string& p : parts) {
    if (!text.empty()) text += " ";
    text += p;
  }
  if (text.empty()) text = "nothing notable";

  std::size_t focus = request.instruction.find(kFocusMarker);
  if (focus != std::string::npos) {
    std::string core = trim(request.instruction.substr(focus + std::string(kFocusMarker).size()));
    if (!core.empty()) text += " focusing on " + core;
  }
  return text;
}

// --- ScriptedReasoner -------------------------------------------------------

ScriptedReasoner::ScriptedReasoner(std::vector<ScriptedRule> rules) : rules_(std::move(rules)) {}

namespace {

std::string scripted_init(const std::string& prompt) {
  std::vector<PromptBlock> blocks = parse_prompt_blocks(prompt);
  std::string question = extract_question(prompt);

  std::vector<std::pair<std::size_t, std::size_t>> ranked;  // (score, index)
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::size_t score = token_overlap(blocks[i].text, question);
    if (score > 0) ranked.emplace_back(score, i);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return blocks[a.second].period.start_s < blocks[b.second].period.start_s;
  });

  InitLocalizationResponse r;
  if (ranked.empty()) {
    r.flag = false;
    r.reason = "None of the descriptions mention anything from the question.";
  } else {
    r.flag = true;
    for (std::size_t i = 0; i < ranked.size() && i < 3; ++i)
      r.periods.push_back(blocks[ranked[i].second].period);
    r.reason = "These periods share the most wording with the question.";
  }
  return to_dict_text(r);
}

std::string scripted_locate(const std::string& prompt) {
  std::vector<PromptBlock> blocks = parse_prompt_blocks(prompt);
  std::string question = extract_question(prompt);
  PeriodSet excluded = extract_excluded(prompt);

  const PromptBlock* best = nullptr;
  std::size_t best_score = 0;
  for (const PromptBlock& b : blocks) {
    if (b.level == MemoryLevel::UltraFine) continue;
    if (excluded.count(b.period)) continue;
    std::size_t score = token_overlap(b.text, question);
    if (!best || score > best_score ||
        (score == best_score && b.period.start_s < best->period.start_s)) {
      best = &b;
      best_score = score;
    }
  }
  if (!best) throw Error("scripted locate: no candidate period left");

  ParsedQuestion q = split_question(question);
  LocateInstructResponse r;
  r.period = best->period;
  r.instruction =
      "Please observe all the details in this video very carefully and provide a detailed and "
      "objective description of what is shown in the video. You should focus particularly on " +
      question_core(q.stem);
  r.reason = "This period's description overlaps the question the most.";
  return to_dict_text(r);
}

std::string scripted_answer(const std::string& prompt, const std::vector<ScriptedRule>& rules,
                            bool forced) {
  std::vector<PromptBlock> blocks = parse_prompt_blocks(prompt);
  std::string question = extract_question(prompt);
  ParsedQuestion q = split_question(question);

  std::vector<std::set<std::string>> block_tokens;
  block_tokens.reserve(blocks.size());
  for (const PromptBlock& b : blocks) block_tokens.push_back(token_set(b.text));

  auto evidence_for = [&](const std::string& text) {
    std::vector<TimePeriod> out;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (all_tokens_present(text, block_tokens[i])) out.push_back(blocks[i].period);
    return out;
  };
  auto best_block_for_question = [&]() {
    std::size_t best = 0, best_score = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      std::size_t score = token_overlap(blocks[i].text, question);
      if (score > best_score) {
        best = i;
        best_score = score;
      }
    }
    return blocks.empty() ? TimePeriod{0, 1} : blocks[best].period;
  };

  AnswerResponse r;
  if (!q.options.empty()) {
    for (const auto& [label, text] : q.options) {
      std::vector<TimePeriod> ev = evidence_for(text);
      if (!ev.empty()) {
        r.confidence = true;
        r.answer = std::string(1, label) + ". " + text;
        r.periods = std::move(ev);
        r.reason = "One description states this option verbatim.";
        break;
      }
    }
    if (!r.confidence && forced) {
      r.confidence = true;
      r.answer = std::string(1, q.options.front().first) + ". " + q.options.front().second;
      r.periods = {best_block_for_question()};
      r.reason = "Best guess under forced answering; no description settles it.";
    }
  } else {
    const ScriptedRule* rule = nullptr;
    for (const ScriptedRule& c : rules)
      if (!c.question.empty() && question.find(c.question) != std::string::npos) {
        rule = &c;
        break;
      }
    if (rule) {
      std::vector<TimePeriod> ev = evidence_for(rule->answer);
      if (!ev.empty()) {
        r.confidence = true;
        r.answer = rule->answer;
        r.periods = std::move(ev);
        r.reason = "The descriptions state this directly.";
      } else if (forced) {
        r.confidence = true;
        r.answer = rule->answer;
        r.periods = {best_block_for_question()};
        r.reason = "Best guess under forced answering.";
      }
    } else if (forced) {
      r.confidence = true;
      r.answer = "Unknown";
      r.periods = {best_block_for_question()};
      r.reason = "Forced answering without any matching rule.";
    }
  }
  if (!r.confidence) {
    r.answer = "No Answer";
    r.periods.clear();
    r.reason = "The current descriptions do not contain the answer.";
  }
  return to_dict_text(r);
}

std::string scripted_relevance(const std::string& prompt) {
  static const std::string kText = "\nGiven Text: ";
  static const std::string kQuestion = "\nGiven Question: ";
  std::size_t t = prompt.find(kText);
  std::size_t qpos = prompt.find(kQuestion, t == std::string::npos ? 0 : t);
  if (t == std::string::npos || qpos == std::string::npos)
    throw UnknownTemplateError("relevance prompt missing Given Text / Given Question");
  std::string text = prompt.substr(t + kText.size(), qpos - (t + kText.size()));
  std::string question = prompt.substr(qpos + kQuestion.size());
  std::size_t score = 1 + std::min<std::size_t>(4, token_overlap(text, question));
  return "Scoring result: " + std::to_string(score) + " points";
}

}  // namespace

std::string ScriptedReasoner::do_complete(const std::string& prompt, const DecodeParams&) {
  if (prompt.find("Scoring result: X points") != std::string::npos)
    return scripted_relevance(prompt);
  if (prompt.find("Since most of these descriptions are rather rough") != std::string::npos)
    return scripted_init(prompt);
  if (prompt.find("Your first task is to identify") != std::string::npos)
    return scripted_locate(prompt);
  if (prompt.find("determine whether you can accurately answer") != std::string::npos) {
    bool forced = prompt.find("final opportunity to answer") != std::string::npos;
    return scripted_answer(prompt, rules_, forced);
  }
  throw UnknownTemplateError("scripted reasoner: unrecognized prompt shape");
}

// --- FaultInjector ----------------------------------------------------------

FaultInjector::FaultInjector(TextBackend& inner, std::uint64_t seed, double fault_rate)
    : inner_(inner), rng_(seed), rate_(fault_rate) {}

std::string FaultInjector::do_complete(const std::string& prompt, const DecodeParams& params) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng_) >= rate_) return inner_.complete(prompt, params);

  enum Family { kInit, kLocate, kAnswer, kRelevance };
  Family family = kAnswer;
  if (prompt.find("Scoring result: X points") != std::string::npos)
    family = kRelevance;
  else if (prompt.find("Since most of these descriptions are rather rough") != std::string::npos)
    family = kInit;
  else if (prompt.find("Your first task is to identify") != std::string::npos)
    family = kLocate;

  switch (rng_() % 5) {
    case 0:
      return "I am sorry, but I cannot respond in the requested format right now.";
    case 1: {
      std::string raw = inner_.complete(prompt, params);
      return raw.substr(0, raw.size() * 2 / 5);
    }
    case 2: {
      std::string raw = inner_.complete(prompt, params);
      auto bend = [&raw](const std::string& from, const std::string& to) {
        std::size_t pos = raw.find(from);
        if (pos == std::string::npos) return false;
        raw.replace(pos, from.size(), to);
        return true;
      };
      bool bent = false;
      switch (family) {
        case kInit: bent = bend("\"Flag\"", "\"Signal\""); break;
        case kLocate: bent = bend("\"Instruction\"", "\"Advice\""); break;
        case kAnswer: bent = bend("\"Confidence\"", "\"Certainty\""); break;
        case kRelevance: bent = bend("Scoring result", "Score"); break;
      }
      if (!bent) return "I am sorry, but I cannot respond in the requested format right now.";
      return raw;
    }
    case 3:
      switch (family) {
        case kInit:
          return "{\"Flag\": True, \"Time Period\": [(900000000, 900000600)], "
                 "\"Reason\": \"corrupted\"}";
        case kLocate:
          return "{\"Time Period\": [(900000000, 900000600)], \"Instruction\": \"corrupted\", "
                 "\"Reason\": \"corrupted\"}";
        case kAnswer:
          return "{\"Confidence\": True, \"Answer\": \"corrupted\", \"Time Period\": \"No Time\", "
                 "\"Reason\": \"corrupted\"}";
        case kRelevance: return "Scoring result: 9 points";
      }
      break;
    default:
      switch (family) {
        case kInit:
          return "{\"Flag\": \"perhaps\", \"Time Period\": [(0, 1)], \"Reason\": \"corrupted\"}";
        case kLocate:
          return "{\"Time Period\": \"soon\", \"Instruction\": \"corrupted\", "
                 "\"Reason\": \"corrupted\"}";
        case kAnswer:
          return "{\"Confidence\": \"perhaps\", \"Answer\": \"corrupted\", "
                 "\"Time Period\": [(0, 1)], \"Reason\": \"corrupted\"}";
        case kRelevance: return "Scoring result: many points";
      }
      break;
  }
  return "I am sorry, but I cannot respond in the requested format right now.";
}

// --- JSON round-trip --------------------------------------------------------

namespace {

nlohmann::json event_to_json(const WorldEvent& ev) {
  nlohmann::json micro = nlohmann::json::object();
  for (const auto& [second, text] : ev.micro) micro[std::to_string(second)] = text;
  return {{"name", ev.name},       {"start_s", ev.period.start_s}, {"end_s", ev.period.end_s},
          {"summary", ev.summary}, {"detail", ev.detail},          {"micro", std::move(micro)}};
}

WorldEvent event_from_json(const nlohmann::json& j) {
  WorldEvent ev;
  ev.name = j.at("name").get<std::string>();
  ev.period = TimePeriod{j.at("start_s").get<std::int64_t>(), j.at("end_s").get<std::int64_t>()};
  ev.summary = j.at("summary").get<std::string>();
  ev.detail = j.at("detail").get<std::string>();
  if (j.contains("micro"))
    for (const auto& [key, value] : j.at("micro").items())
      ev.micro[std::stoll(key)] = value.get<std::string>();
  if (!ev.period.valid()) throw ConfigError("world event has an invalid period");
  for (const auto& [second, text] : ev.micro)
    if (!ev.period.contains(second))
      throw ConfigError("world event micro second " + std::to_string(second) +
                        " outside its period");
  return ev;
}

nlohmann::json qa_to_json(const SimQA& qa) {
  return {{"id", qa.id},
          {"video_id", qa.video_id},
          {"stem", qa.stem},
          {"options", qa.options},
          {"answer_label", qa.answer_label},
          {"answer_text", qa.answer_text},
          {"planted_second", qa.planted_second}};
}

SimQA qa_from_json(const nlohmann::json& j) {
  SimQA qa;
  qa.id = j.at("id").get<std::string>();
  qa.video_id = j.value("video_id", std::string{});
  qa.stem = j.at("stem").get<std::string>();
  qa.options = j.value("options", std::vector<std::string>{});
  qa.answer_label = j.value("answer_label", std::string{});
  qa.answer_text = j.value("answer_text", std::string{});
  qa.planted_second = j.value("planted_second", std::int64_t{0});
  return qa;
}

}  // namespace

nlohmann::json world_to_json(const WorldSpec& world, const std::vector<SimQA>& qas) {
  nlohmann::json events = nlohmann::json::array();
  for (const WorldEvent& ev : world.events) events.push_back(event_to_json(ev));
  nlohmann::json j = {
      {"video_id", world.video_id}, {"duration_s", world.duration_s}, {"events", std::move(events)}};
  if (!qas.empty()) {
    nlohmann::json qj = nlohmann::json::array();
    for (const SimQA& qa : qas) qj.push_back(qa_to_json(qa));
    j["qas"] = std::move(qj);
  }
  return j;
}

WorldSpec world_from_json(const nlohmann::json& j, std::vector<SimQA>* qas) {
  WorldSpec world;
  try {
    world.video_id = j.at("video_id").get<std::string>();
    world.duration_s = j.at("duration_s").get<std::int64_t>();
    for (const nlohmann::json& ej : j.at("events")) world.events.push_back(event_from_json(ej));
    if (qas && j.contains("qas"))
      for (const nlohmann::json& qj : j.at("qas")) qas->push_back(qa_from_json(qj));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed world description: ") + e.what());
  }
  if (world.duration_s <= 0) throw ConfigError("world duration must be positive");
  for (const WorldEvent& ev : world.events)
    if (ev.period.start_s < 0 || ev.period.end_s > world.duration_s)
      throw ConfigError("world event outside the video timeline");
  return world;
}

void save_world(const std::filesystem::path& path, const WorldSpec& world,
                const std::vector<SimQA>& qas) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write world file: " + path.string());
  out << world_to_json(world, qas).dump(2) << "\n";
}

WorldSpec load_world(const std::filesystem::path& path, std::vector<SimQA>* qas) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read world file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("world file is not valid JSON: " + std::string(e.what()));
  }
  return world_from_json(j, qas);
}

nlohmann::json needles_to_json(const std::vector<NeedleSpec>& needles) {
  nlohmann::json arr = nlohmann::json::array();
  for (const NeedleSpec& n : needles) {
    nlohmann::json events = nlohmann::json::array();
    for (const WorldEvent& ev : n.events) events.push_back(event_to_json(ev));
    nlohmann::json qas = nlohmann::json::array();
    for (const SimQA& qa : n.qas) qas.push_back(qa_to_json(qa));
    arr.push_back(
        {{"length_s", n.length_s}, {"events", std::move(events)}, {"qas", std::move(qas)}});
  }
  return {{"needles", std::move(arr)}};
}

std::vector<NeedleSpec> needles_from_json(const nlohmann::json& j) {
  std::vector<NeedleSpec> out;
  try {
    for (const nlohmann::json& nj : j.at("needles")) {
      NeedleSpec n;
      n.length_s = nj.at("length_s").get<std::int64_t>();
      for (const nlohmann::json& ej : nj.at("events")) n.events.push_back(event_from_json(ej));
      if (nj.contains("qas"))
        for (const nlohmann::json& qj : nj.at("qas")) n.qas.push_back(qa_from_json(qj));
      if (n.length_s <= 0) throw ConfigError("needle length must be positive");
      for (const WorldEvent& ev : n.events)
        if (ev.period.start_s < 0 || ev.period.end_s > n.length_s)
          throw ConfigError("needle event outside the needle clip");
      out.push_back(std::move(n));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed needle description: ") + e.what());
  }
  return out;
}

// --- generators -------------------------------------------------------------

namespace {

const std::vector<std::string>& adjective_pool() {
  static const std::vector<std::string> pool = {
      "amber",  "crimson",  "velvet", "granite", "cobalt", "ivory",  "scarlet",
      "copper", "jade",     "umber",  "cedar",   "onyx",   "russet", "indigo",
      "sable",  "maroon",   "ochre",  "pearl",   "slate",  "auburn"};
  return pool;
}

const std::vector<std::string>& noun_pool() {
  static const std::vector<std::string> pool = {
      "festival",  "rehearsal",  "auction",  "regatta", "parade",    "workshop", "banquet",
      "ceremony",  "tournament", "recital",  "harvest", "migration", "eclipse",  "carnival",
      "summit",    "voyage",     "pageant",  "seminar", "vigil",     "derby"};
  return pool;
}

const std::vector<std::string>& actor_pool() {
  static const std::vector<std::string> pool = {
      "juggler",    "curator",   "falconer",    "locksmith", "cartographer",
      "beekeeper",  "violinist", "blacksmith",  "astronomer", "milliner",
      "glassblower", "archivist", "surveyor",   "puppeteer",  "chandler"};
  return pool;
}

const std::vector<std::string>& prop_pool() {
  static const std::vector<std::string> pool = {
      "lantern", "easel",  "compass", "spindle", "ledger",    "telescope", "anvil", "harp",
      "sextant", "loom",   "mortar",  "quill",   "bellows",   "astrolabe", "gong"};
  return pool;
}

const std::vector<std::string>& answer_pool() {
  static const std::vector<std::string> pool = {
      "medallion", "sigil", "locket", "amulet", "talisman", "crest", "scarab", "cameo",
      "rune",      "beacon", "effigy", "relic",  "idol",     "totem", "charm"};
  return pool;
}

const std::vector<std::string>& filler_pool() {
  static const std::vector<std::string> pool = {
      "drizzle",   "lattice",  "ember",    "thicket", "gossamer", "quarry",   "plinth",
      "meander",   "cobble",   "trellis",  "fresco",  "alcove",   "garret",   "mosaic",
      "parapet",   "cloister", "gable",    "turret",  "portico",  "cornice",  "rotunda",
      "atrium",    "archway",  "buttress", "spire",   "finial",   "transom",  "lintel",
      "mullion",   "corbel",   "frieze",   "niche",   "apse",     "nave",     "cloche",
      "gantry",    "skylight", "awning",   "bollard", "culvert"};
  return pool;
}

// Mints lowercase tokens that are unique within one generator run. The hex
// tag ties tokens to the seed so independently generated worlds are unlikely
// to share vocabulary.
class TokenMint {
 public:
  explicit TokenMint(std::uint64_t seed) : seed_(seed) {}

  std::string next(const std::vector<std::string>& pool) {
    for (;;) {
      const std::string& word = pool[counter_ % pool.size()];
      std::uint64_t h =
          fnv1a64(std::to_string(seed_) + ":" + std::to_string(counter_) + ":" + word);
      ++counter_;
      char tag[8];
      std::snprintf(tag, sizeof tag, "%06llx",
                    static_cast<unsigned long long>(h & 0xffffff));
      std::string token = word + tag;
      if (used_.insert(token).second) return token;
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::set<std::string> used_;
};

struct EventVocab {
  std::string n1, n2, actor, prop;
};

EventVocab mint_vocab(TokenMint& mint) {
  return {mint.next(adjective_pool()), mint.next(noun_pool()), mint.next(actor_pool()),
          mint.next(prop_pool())};
}

std::string make_summary(const EventVocab& v) {
  return "the " + v.n1 + " " + v.n2 + " again and again and again";
}

std::string make_detail(const EventVocab& v) {
  return "during the " + v.n1 + " " + v.n2 + " the " + v.actor + " arranges the " + v.prop;
}

std::string micro_fillers(TokenMint& mint, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) {
    if (!out.empty()) out += " ";
    out += mint.next(filler_pool());
  }
  return out;
}

std::string make_micro(TokenMint& mint, const EventVocab& v) {
  return micro_fillers(mint, 10) + " the " + v.actor + " studies the " + v.prop;
}

WorldEvent make_filler_event(TokenMint& mint, TimePeriod period) {
  EventVocab v = mint_vocab(mint);
  WorldEvent ev;
  ev.name = v.n1 + " " + v.n2;
  ev.period = period;
  ev.summary = make_summary(v);
  ev.detail = make_detail(v);
  for (std::int64_t s = period.start_s; s < period.end_s; ++s) ev.micro[s] = make_micro(mint, v);
  return ev;
}

std::string make_stem(const EventVocab& v, const std::string& verb) {
  return "During the " + v.n1 + " " + v.n2 + " event, what does the " + v.actor + " " + verb +
         " beside the " + v.prop + "?";
}

}  // namespace

WorldGenOptions::WorldGenOptions() = default;

GeneratedWorld make_world(std::uint64_t seed, const WorldGenOptions& options) {
  const ScopeConfig& scope = options.scope;
  scope.validate();
  const std::int64_t duration = options.duration_s;
  if (duration < 2 * scope.t_fine_s)
    throw ConfigError("world duration too short for a planted fine-scope event");
  if (options.option_count < 2 || options.option_count > 26)
    throw ConfigError("option count must be between 2 and 26");

  std::mt19937_64 rng(seed);
  TokenMint mint(seed);

  GeneratedWorld out;
  out.world.video_id = "sim-" + std::to_string(seed);
  out.world.duration_s = duration;

  // The answer-bearing event spans exactly one fine scope and never crosses
  // a coarse clip boundary, so descent reaches it within the iteration cap.
  ClipDivision coarse = divide(duration, scope.t_coarse_s);
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < coarse.periods.size(); ++i)
    if (coarse.periods[i].duration_s() >= scope.t_fine_s) eligible.push_back(i);
  const TimePeriod clip =
      coarse.periods[eligible[std::uniform_int_distribution<std::size_t>(
          0, eligible.size() - 1)(rng)]];
  const std::int64_t target_start = std::uniform_int_distribution<std::int64_t>(
      clip.start_s, clip.end_s - scope.t_fine_s)(rng);
  const TimePeriod target_period{target_start, target_start + scope.t_fine_s};

  EventVocab tv = mint_vocab(mint);
  const std::string answer = mint.next(answer_pool());
  const std::int64_t planted = std::uniform_int_distribution<std::int64_t>(
      target_period.start_s, target_period.end_s - 1)(rng);

  WorldEvent target;
  target.name = tv.n1 + " " + tv.n2;
  target.period = target_period;
  target.summary = make_summary(tv);
  target.detail = "during the " + tv.n1 + " " + tv.n2 + " the " + tv.actor + " arranges the " +
                  tv.prop;
  for (std::int64_t s = target_period.start_s; s < target_period.end_s; ++s) {
    if (s == planted)
      target.micro[s] = micro_fillers(mint, 10) + " the " + tv.actor + " reveals the " + answer +
                        " beside the " + tv.prop;
    else
      target.micro[s] = make_micro(mint, tv);
  }

  std::int64_t t = 0;
  while (t < duration) {
    if (t == target_period.start_s) {
      out.world.events.push_back(target);
      t = target_period.end_s;
      continue;
    }
    const std::int64_t boundary = t < target_period.start_s ? target_period.start_s : duration;
    const std::int64_t max_len = std::min<std::int64_t>(60, boundary - t);
    const std::int64_t min_len = std::min<std::int64_t>(20, max_len);
    const std::int64_t len = std::uniform_int_distribution<std::int64_t>(min_len, max_len)(rng);
    out.world.events.push_back(make_filler_event(mint, TimePeriod{t, t + len}));
    t += len;
  }

  SimQA& qa = out.qa;
  qa.id = out.world.video_id + "-q0";
  qa.video_id = out.world.video_id;
  qa.stem = make_stem(tv, "reveal");
  qa.answer_text = answer;
  qa.planted_second = planted;
  std::vector<std::string> opts = {answer};
  for (int i = 1; i < options.option_count; ++i) opts.push_back(mint.next(answer_pool()));
  std::shuffle(opts.begin(), opts.end(), rng);
  qa.options = opts;
  for (std::size_t i = 0; i < opts.size(); ++i)
    if (opts[i] == answer) qa.answer_label = std::string(1, static_cast<char>('A' + i));
  return out;
}

std::vector<NeedleSpec> make_needles(std::uint64_t seed, int count, int qas_per_needle) {
  static const std::vector<std::pair<std::string, std::string>> verbs = {
      {"reveal", "reveals"},   {"carry", "carries"},   {"inspect", "inspects"},
      {"adjust", "adjusts"},   {"balance", "balances"}, {"measure", "measures"},
      {"polish", "polishes"},  {"display", "displays"}};
  if (count < 1) throw ConfigError("needle count must be positive");
  if (qas_per_needle < 1 || qas_per_needle > static_cast<int>(verbs.size()))
    throw ConfigError("questions per needle must be between 1 and " +
                      std::to_string(verbs.size()));

  std::mt19937_64 rng(seed);
  TokenMint mint(seed);
  std::vector<NeedleSpec> out;

  for (int i = 0; i < count; ++i) {
    NeedleSpec needle;
    needle.length_s = 10;

    EventVocab v = mint_vocab(mint);
    std::vector<std::string> answers;
    for (int qx = 0; qx < qas_per_needle; ++qx) answers.push_back(mint.next(answer_pool()));

    // Every second of the needle carries every planted answer, so recovery
    // survives the needle straddling coarse or fine clip boundaries.
    std::string facts;
    for (int qx = 0; qx < qas_per_needle; ++qx)
      facts += " " + verbs[qx].second + " the " + answers[qx];

    WorldEvent ev;
    ev.name = v.n1 + " " + v.n2;
    ev.period = TimePeriod{0, needle.length_s};
    ev.summary = make_summary(v);
    ev.detail = make_detail(v);
    for (std::int64_t s = 0; s < needle.length_s; ++s)
      ev.micro[s] = micro_fillers(mint, 6) + " the " + v.actor + facts + " beside the " + v.prop;
    needle.events.push_back(std::move(ev));

    for (int qx = 0; qx < qas_per_needle; ++qx) {
      SimQA qa;
      qa.id = "needle-" + std::to_string(i) + "-q" + std::to_string(qx);
      qa.stem = make_stem(v, verbs[qx].first);
      qa.answer_text = answers[qx];
      qa.planted_second = std::uniform_int_distribution<std::int64_t>(0, needle.length_s - 1)(rng);
      std::vector<std::string> opts = {answers[qx]};
      for (int d = 1; d < 4; ++d) opts.push_back(mint.next(answer_pool()));
      std::shuffle(opts.begin(), opts.end(), rng);
      qa.options = opts;
      for (std::size_t oi = 0; oi < opts.size(); ++oi)
        if (opts[oi] == answers[qx]) qa.answer_label = std::string(1, static_cast<char>('A' + oi));
      needle.qas.push_back(std::move(qa));
    }
    out.push_back(std::move(needle));
  }
  return out;
}

}  // namespace lucy
