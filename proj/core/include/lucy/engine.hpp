#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lucy/backend.hpp"
#include "lucy/memory_list.hpp"
#include "lucy/responses.hpp"
#include "lucy/scope.hpp"
#include "lucy/time_model.hpp"

namespace lucy {

struct EngineOptions {
  // When set, coarse memory is reused from <cache_dir>/<video_id>.memory.jsonl
  // and every captioned clip is written back.
  std::optional<std::filesystem::path> cache_dir;

  // When set, each ask() writes <trace_dir>/<video_id>.<question_hash>.trace.json.
  std::optional<std::filesystem::path> trace_dir;

  int caption_workers = 8;

  // Upper bound on rendered prompt size. Oversized prompts shed unexplored,
  // non-neighboring coarse entries from the rendering (never from memory)
  // before giving up with BudgetError.
  std::size_t context_budget_chars = 200000;

  // Repair retries per reasoning call on malformed output.
  int max_repairs = 2;

  // Deepest level exploration may create. Unset means ultra-fine.
  std::optional<MemoryLevel> depth_cap;

  // Zero out wall-clock fields so traces are byte-stable across runs.
  bool deterministic_trace = false;
};

// One logged step of a run. Every backend round-trip belongs to exactly one
// event; `attempts` counts physical calls including repair retries.
struct LoopEvent {
  enum class Kind { Init, Locate, Caption, Answer, ForcedAnswer, Error };

  Kind kind = Kind::Init;
  int iteration = 0;  // 0 = before the first exploration
  TimePeriod period;
  std::optional<MemoryLevel> level;
  int attempts = 1;
  std::size_t prompt_chars = 0;
  std::size_t response_chars = 0;
  std::int64_t wall_ms = 0;
  std::size_t memory_size = 0;  // working-memory entries after this step
  std::string note;
};

const char* to_string(LoopEvent::Kind kind);

// Logical calls collapse repair retries into one; physical counts every
// completion request actually sent.
struct CallLedger {
  std::int64_t logical_reasoning = 0;
  std::int64_t physical_reasoning = 0;
  std::int64_t caption_calls = 0;
};

struct FinalResponse {
  AnswerResponse answer;
  bool forced = false;
  int iterations_used = 0;
  std::vector<LoopEvent> events;
  MemoryList memory;  // working memory at the end of the run
  CallLedger ledger;
  std::string trace_path;  // empty when tracing is disabled
};

// Orchestrates hierarchical video memory: coarse memorization up front, then
// per-question iterative descent. One reasoning backend localizes, instructs,
// and answers; one captioning backend turns clips into text.
//
// A full run spends at most 2 + 2*max_iterations + 1 logical reasoning calls:
// initial localization, initial answer check, locate+instruct and answer
// check per iteration, and one forced answer after the last iteration.
class Pipeline {
 public:
  Pipeline(TextBackend& reasoner, CaptionBackend& captioner, ScopeConfig scope,
           EngineOptions options = {});

  // Ensures every coarse clip of `video` has a caption, reusing the cache
  // when possible, and returns the coarse memory.
  MemoryList memorize(const VideoMeta& video);

  // Full question run: sparse initialization, then locate/recaption/answer
  // iterations until a confident answer or the iteration cap, then a forced
  // answer. Never exceeds the logical call budget.
  FinalResponse ask(const VideoMeta& video, const std::string& question);

  int reasoning_call_budget() const;

  const ScopeConfig& scope() const { return scope_; }
  const EngineOptions& options() const { return options_; }

 private:
  struct Run;

  MemoryList build_coarse(const VideoMeta& video, MemoryList& persistent,
                          std::vector<LoopEvent>& events);
  void explore(Run& run, const LocateInstructResponse& target);
  std::string write_trace(const Run& run, const FinalResponse& response) const;

  TextBackend& reasoner_;
  CaptionBackend& captioner_;
  ScopeConfig scope_;
  EngineOptions options_;
};

}  // namespace lucy
