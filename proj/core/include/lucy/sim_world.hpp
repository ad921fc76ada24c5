#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lucy/backend.hpp"
#include "lucy/scope.hpp"
#include "lucy/time_model.hpp"

namespace lucy {

// One annotated happening on the world timeline. summary feeds coarse
// captions, detail feeds fine captions, micro maps individual seconds to
// frame-level facts.
struct WorldEvent {
  std::string name;
  TimePeriod period;
  std::string summary;
  std::string detail;
  std::map<std::int64_t, std::string> micro;  // absolute second -> text

  bool operator==(const WorldEvent&) const = default;
};

// Ground-truth annotation timeline standing in for a real video. Events may
// overlap; micro keys stay within their event's period.
struct WorldSpec {
  std::string video_id;
  std::int64_t duration_s = 0;
  std::vector<WorldEvent> events;

  bool operator==(const WorldSpec&) const = default;
};

// Multiple-choice question planted by the generator. planted_second is the
// timeline second whose micro text carries the answer token.
struct SimQA {
  std::string id;
  std::string video_id;
  std::string stem;
  std::vector<std::string> options;  // labeled A, B, C, ... in order
  std::string answer_label;
  std::string answer_text;
  std::int64_t planted_second = 0;

  bool operator==(const SimQA&) const = default;
};

// Self-contained 10-second clip with its own events and planted questions.
// Event periods and planted seconds are relative to the needle's start.
struct NeedleSpec {
  std::int64_t length_s = 10;
  std::vector<WorldEvent> events;
  std::vector<SimQA> qas;
};

nlohmann::json world_to_json(const WorldSpec& world, const std::vector<SimQA>& qas = {});
WorldSpec world_from_json(const nlohmann::json& j, std::vector<SimQA>* qas = nullptr);
void save_world(const std::filesystem::path& path, const WorldSpec& world,
                const std::vector<SimQA>& qas = {});
WorldSpec load_world(const std::filesystem::path& path, std::vector<SimQA>* qas = nullptr);

nlohmann::json needles_to_json(const std::vector<NeedleSpec>& needles);
std::vector<NeedleSpec> needles_from_json(const nlohmann::json& j);

// --- prompt-side helpers shared by the scripted agents ---------------------

// Lowercased whitespace tokens, deduplicated.
std::vector<std::string> tokenize_distinct(const std::string& text);

// Number of distinct lowercase tokens two texts share.
std::size_t token_overlap(const std::string& a, const std::string& b);

// One memory line recovered from a rendered prompt.
struct PromptBlock {
  TimePeriod period;
  MemoryLevel level = MemoryLevel::Coarse;
  std::string text;
};

std::vector<PromptBlock> parse_prompt_blocks(const std::string& prompt);

// --- scripted backends ------------------------------------------------------

// Deterministic captioner backed by the annotation timeline. Caption content
// is gated by clip duration: longer than the fine scope yields event
// summaries, at most the ultra-fine scope yields per-second micro text, and
// anything between yields event details. Clips covering nothing yield
// "nothing notable". An instruction asking to "focus particularly on X"
// appends a deterministic " focusing on X" suffix, mimicking
// question-guided recaptioning.
class ScriptedCaptioner : public CaptionBackend {
 public:
  ScriptedCaptioner(WorldSpec world, ScopeConfig scope);

  const WorldSpec& world() const { return world_; }

 protected:
  std::string do_caption(const ClipRequest& request) override;

 private:
  WorldSpec world_;
  ScopeConfig scope_;
};

// Optional plain-question rule for the scripted reasoner: when the prompt's
// question contains `question` verbatim, the expected answer is `answer`.
struct ScriptedRule {
  std::string question;
  std::string answer;
};

// Deterministic reasoning agent driven by keyword overlap. Recognizes the
// four prompt families by their fixed wording and emits well-formed
// dictionary responses:
//   - init localization: top-three blocks by question overlap, refusing
//     when nothing overlaps;
//   - locate+instruct: best non-excluded coarse-or-fine block, with an
//     instruction derived from the question;
//   - answer: confident exactly when an option's tokens (or a rule answer's
//     tokens) all appear in one block, citing the matching blocks;
//   - relevance: 1 + min(4, overlap) points.
// Throws UnknownTemplateError for anything else.
class ScriptedReasoner : public TextBackend {
 public:
  explicit ScriptedReasoner(std::vector<ScriptedRule> rules = {});

 protected:
  std::string do_complete(const std::string& prompt, const DecodeParams& params) override;

 private:
  std::vector<ScriptedRule> rules_;
};

// Wraps a reasoning backend and corrupts a seeded fraction of replies with
// representative failure shapes: prose without a dictionary, truncation,
// missing keys, out-of-range periods, mistyped fields.
class FaultInjector : public TextBackend {
 public:
  FaultInjector(TextBackend& inner, std::uint64_t seed, double fault_rate);

 protected:
  std::string do_complete(const std::string& prompt, const DecodeParams& params) override;

 private:
  TextBackend& inner_;
  std::mt19937_64 rng_;
  double rate_;
};

// --- generators -------------------------------------------------------------

struct WorldGenOptions {
  std::int64_t duration_s = 2000;
  ScopeConfig scope;  // defaults to 200/10/1 scopes
  int option_count = 4;

  WorldGenOptions();
};

// A generated world plus its planted deep-fact question. The fact lives in
// exactly one second's micro text; summaries and details never leak it, so
// answering requires descending to ultra-fine memory.
struct GeneratedWorld {
  WorldSpec world;
  SimQA qa;
};

GeneratedWorld make_world(std::uint64_t seed, const WorldGenOptions& options = {});

// `count` self-contained needle clips, each with `qas_per_needle` planted
// questions answerable from any second of the needle.
std::vector<NeedleSpec> make_needles(std::uint64_t seed, int count, int qas_per_needle = 4);

}  // namespace lucy
