#include "lucy/engine.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "lucy/errors.hpp"
#include "lucy/media.hpp"
#include "lucy/parse.hpp"
#include "lucy/prompts.hpp"

namespace lucy {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

struct CaptionResult {
  std::string text;
  std::int64_t wall_ms = 0;
};

// Runs the caption jobs on a bounded worker pool. Results keep job order.
// The first failure wins; remaining workers drain without starting new jobs
// and the exception is rethrown after the join, so callers never see a
// partial commit.
std::vector<CaptionResult> run_caption_jobs(CaptionBackend& captioner,
                                            const std::vector<ClipRequest>& jobs, int workers) {
  std::vector<CaptionResult> results(jobs.size());
  if (jobs.empty()) return results;

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= jobs.size()) return;
      {
        std::lock_guard<std::mutex> lock(err_mu);
        if (first_error) return;
      }
      const auto t0 = Clock::now();
      try {
        std::string text = captioner.caption(jobs[i]);
        results[i] = CaptionResult{std::move(text), ms_since(t0)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

bool adjacent_to_any(const TimePeriod& p, const PeriodSet& explored) {
  for (const TimePeriod& e : explored)
    if (p.end_s == e.start_s || e.end_s == p.start_s) return true;
  return false;
}

// Renders a prompt within the character budget. Oversized renderings shed the
// earliest coarse entry that is neither explored nor adjacent to an explored
// period; shedding affects only this rendering, never the memory itself.
std::string budgeted_prompt(const MemoryList& cm, const PeriodSet& explored, std::size_t budget,
                            const std::function<std::string(const MemoryList&)>& render) {
  MemoryList view = cm;
  for (;;) {
    std::string prompt = render(view);
    if (prompt.size() <= budget) return prompt;

    const MemoryEntry* victim = nullptr;
    if (view.size() > 1) {
      for (const MemoryEntry& e : view.entries()) {
        if (e.level != MemoryLevel::Coarse) continue;
        if (explored.count(e.period)) continue;
        if (adjacent_to_any(e.period, explored)) continue;
        victim = &e;
        break;
      }
    }
    if (!victim)
      throw BudgetError("rendered prompt of " + std::to_string(prompt.size()) +
                        " chars exceeds the context budget of " + std::to_string(budget) +
                        " chars and no coarse entry can be shed");
    PeriodSet keep;
    for (const MemoryEntry& e : view.entries())
      if (!(e.period == victim->period)) keep.insert(e.period);
    view = view.filter_by_periods(keep);
  }
}

// One logical reasoning call: render, complete, parse, with repair retries.
// Always appends exactly one event; nullopt means the parse never succeeded
// and the caller should degrade.
template <typename T>
std::optional<T> reasoned_call(TextBackend& reasoner, const EngineOptions& options,
                               LoopEvent::Kind kind, int iteration, std::size_t memory_size,
                               const std::function<std::string()>& render,
                               const std::function<T(const std::string&)>& parse,
                               std::string_view schema_hint, std::vector<LoopEvent>& events) {
  LoopEvent ev;
  ev.kind = kind;
  ev.iteration = iteration;
  ev.memory_size = memory_size;
  ev.attempts = 0;

  AttemptObserver observe = [&ev](const ParseAttempt& attempt) {
    ++ev.attempts;
    ev.prompt_chars = attempt.prompt.size();
    ev.response_chars = attempt.raw.size();
    ev.note = attempt.ok ? std::string{} : attempt.error;
  };

  const auto t0 = Clock::now();
  std::optional<T> out;
  try {
    out = retry_parse<T>(render, parse, reasoner, DecodeParams{}, options.max_repairs,
                         schema_hint, observe);
  } catch (const ParseError&) {
    out = std::nullopt;  // note already carries the last error
  }
  ev.wall_ms = options.deterministic_trace ? 0 : ms_since(t0);
  events.push_back(std::move(ev));
  return out;
}

nlohmann::json period_json(const TimePeriod& p) {
  return nlohmann::json::array({p.start_s, p.end_s});
}

}  // namespace

const char* to_string(LoopEvent::Kind kind) {
  switch (kind) {
    case LoopEvent::Kind::Init: return "init";
    case LoopEvent::Kind::Locate: return "locate";
    case LoopEvent::Kind::Caption: return "caption";
    case LoopEvent::Kind::Answer: return "answer";
    case LoopEvent::Kind::ForcedAnswer: return "forced_answer";
    case LoopEvent::Kind::Error: return "error";
  }
  return "unknown";
}

struct Pipeline::Run {
  VideoMeta video;
  std::string question;
  MemoryList cm;          // working memory for this question
  MemoryList persistent;  // everything captioned so far, mirrored to cache
  ClipDivision coarse_division;
  PeriodSet explored;
  std::vector<LoopEvent> events;
  int iteration = 0;
};

Pipeline::Pipeline(TextBackend& reasoner, CaptionBackend& captioner, ScopeConfig scope,
                   EngineOptions options)
    : reasoner_(reasoner), captioner_(captioner), scope_(std::move(scope)),
      options_(std::move(options)) {
  scope_.validate();
  if (options_.caption_workers < 1) throw ConfigError("caption_workers must be at least 1");
  if (options_.max_repairs < 0) throw ConfigError("max_repairs must not be negative");
}

int Pipeline::reasoning_call_budget() const { return 2 + 2 * scope_.max_iterations + 1; }

MemoryList Pipeline::build_coarse(const VideoMeta& video, MemoryList& persistent,
                                  std::vector<LoopEvent>& events) {
  if (video.video_id.empty()) throw ConfigError("video_id must not be empty");
  if (video.duration_s <= 0) throw ConfigError("video duration must be positive");

  const ClipDivision division = divide(video.duration_s, scope_.t_coarse_s);
  std::vector<ClipRequest> jobs;
  for (const TimePeriod& p : division.periods)
    if (!persistent.find(p, MemoryLevel::Coarse))
      jobs.push_back(ClipRequest{video, p, scope_.fps_of(MemoryLevel::Coarse),
                                 kCoarseCaptionInstruction, MemoryLevel::Coarse});

  if (!jobs.empty()) {
    const std::size_t already = division.size() - jobs.size();
    std::vector<CaptionResult> results =
        run_caption_jobs(captioner_, jobs, options_.caption_workers);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      persistent.upsert(MemoryEntry{video.video_id, jobs[i].period, MemoryLevel::Coarse,
                                    results[i].text, kCoarseCaptionInstruction, 0});
      LoopEvent ev;
      ev.kind = LoopEvent::Kind::Caption;
      ev.iteration = 0;
      ev.period = jobs[i].period;
      ev.level = MemoryLevel::Coarse;
      ev.prompt_chars = jobs[i].instruction.size();
      ev.response_chars = results[i].text.size();
      ev.wall_ms = options_.deterministic_trace ? 0 : results[i].wall_ms;
      ev.memory_size = already + i + 1;
      events.push_back(std::move(ev));
    }
    if (options_.cache_dir) cache_store(*options_.cache_dir, video.video_id, persistent);
  }

  MemoryList coarse;
  for (const TimePeriod& p : division.periods) coarse.upsert(*persistent.find(p, MemoryLevel::Coarse));
  return coarse;
}

MemoryList Pipeline::memorize(const VideoMeta& video) {
  MemoryList persistent =
      options_.cache_dir ? cache_load(*options_.cache_dir, video.video_id) : MemoryList{};
  std::vector<LoopEvent> events;
  return build_coarse(video, persistent, events);
}

void Pipeline::explore(Run& run, const LocateInstructResponse& target) {
  const MemoryEntry* parent = nullptr;
  for (const MemoryEntry& e : run.cm.entries()) {
    if (!(e.period == target.period)) continue;
    if (!scope_.child_level(e.level)) continue;
    if (run.explored.count(e.period)) continue;
    parent = &e;
    break;
  }
  if (!parent) throw ExhaustedError("located period does not match an explorable memory entry");

  const MemoryLevel child_level = *scope_.child_level(parent->level);
  const std::vector<TimePeriod> children =
      divide_period(parent->period, scope_.scope_of(child_level));

  std::vector<ClipRequest> jobs;
  jobs.reserve(children.size() + 1);
  jobs.push_back(ClipRequest{run.video, parent->period, scope_.fps_of(parent->level),
                             target.instruction, parent->level});
  for (const TimePeriod& c : children)
    jobs.push_back(
        ClipRequest{run.video, c, scope_.fps_of(child_level), target.instruction, child_level});

  // All captions are staged before anything is committed; a failure above
  // leaves memory, explored set, and cache untouched.
  std::vector<CaptionResult> results = run_caption_jobs(captioner_, jobs, options_.caption_workers);

  MemoryEntry refreshed = *parent;
  refreshed.text = results[0].text;
  refreshed.instruction = target.instruction;
  run.cm.upsert(refreshed);
  run.persistent.upsert(refreshed);
  for (std::size_t i = 0; i < children.size(); ++i) {
    MemoryEntry child{run.video.video_id, children[i], child_level, results[i + 1].text,
                      target.instruction, 0};
    run.cm.upsert(child);
    run.persistent.upsert(child);
  }
  run.explored.insert(target.period);
  if (options_.cache_dir) cache_store(*options_.cache_dir, run.video.video_id, run.persistent);

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    LoopEvent ev;
    ev.kind = LoopEvent::Kind::Caption;
    ev.iteration = run.iteration;
    ev.period = jobs[i].period;
    ev.level = jobs[i].level;
    ev.prompt_chars = jobs[i].instruction.size();
    ev.response_chars = results[i].text.size();
    ev.wall_ms = options_.deterministic_trace ? 0 : results[i].wall_ms;
    ev.memory_size = run.cm.size();
    run.events.push_back(std::move(ev));
  }
}

FinalResponse Pipeline::ask(const VideoMeta& video, const std::string& question) {
  if (question.empty()) throw ConfigError("question must not be empty");

  const std::int64_t reasoning_before = reasoner_.calls();
  const std::int64_t captions_before = captioner_.calls();

  Run run;
  run.video = video;
  run.question = question;
  run.persistent =
      options_.cache_dir ? cache_load(*options_.cache_dir, video.video_id) : MemoryList{};
  run.cm = build_coarse(video, run.persistent, run.events);
  run.coarse_division = divide(video.duration_s, scope_.t_coarse_s);

  auto finish = [&](const AnswerResponse& answer, bool forced) {
    FinalResponse out;
    out.answer = answer;
    out.forced = forced;
    out.iterations_used = static_cast<int>(run.explored.size());
    out.events = run.events;
    out.memory = run.cm;
    out.ledger.physical_reasoning = reasoner_.calls() - reasoning_before;
    out.ledger.caption_calls = captioner_.calls() - captions_before;
    for (const LoopEvent& ev : run.events)
      if (ev.attempts > 0 &&
          (ev.kind == LoopEvent::Kind::Init || ev.kind == LoopEvent::Kind::Locate ||
           ev.kind == LoopEvent::Kind::Answer || ev.kind == LoopEvent::Kind::ForcedAnswer))
        ++out.ledger.logical_reasoning;
    if (options_.trace_dir) out.trace_path = write_trace(run, out);
    return out;
  };

  auto render_with = [&](const std::function<std::string(const MemoryList&)>& render) {
    return budgeted_prompt(run.cm, run.explored, options_.context_budget_chars, render);
  };
  auto render_answer = [&, this](bool force) {
    return render_with([&, force](const MemoryList& view) {
      return render_answer_prompt(view, question, video.duration_s, force);
    });
  };

  // Sparse initialization: ask for the most promising coarse periods and
  // keep only them plus their immediate neighbors. Degrades to the full
  // coarse memory when the reply is unusable or names no periods.
  std::optional<InitLocalizationResponse> init = reasoned_call<InitLocalizationResponse>(
      reasoner_, options_, LoopEvent::Kind::Init, 0, run.cm.size(),
      [&] {
        return render_with([&](const MemoryList& view) {
          return render_init_localization_prompt(view, question, scope_.init_relevant_count);
        });
      },
      [&](const std::string& raw) {
        return parse_init_localization(raw, run.coarse_division.periods);
      },
      kInitLocalizationSchemaHint, run.events);
  if (init && init->flag && !init->periods.empty()) {
    const std::vector<TimePeriod> expanded =
        neighborhood_expand(init->periods, run.coarse_division);
    run.cm = run.cm.filter_by_periods(PeriodSet(expanded.begin(), expanded.end()));
    run.events.back().memory_size = run.cm.size();
  }

  auto answer_check = [&](LoopEvent::Kind kind, bool force) {
    return reasoned_call<AnswerResponse>(
        reasoner_, options_, kind, run.iteration, run.cm.size(), [&] { return render_answer(force); },
        [](const std::string& raw) { return parse_answer(raw); }, kAnswerSchemaHint, run.events);
  };

  std::optional<AnswerResponse> answer = answer_check(LoopEvent::Kind::Answer, false);
  if (answer && answer->confidence) return finish(*answer, false);

  for (int iteration = 1; iteration <= scope_.max_iterations; ++iteration) {
    run.iteration = iteration;

    std::vector<TimePeriod> eligible;
    for (const MemoryEntry& e : run.cm.entries()) {
      const std::optional<MemoryLevel> child = scope_.child_level(e.level);
      if (!child) continue;
      if (options_.depth_cap && *child > *options_.depth_cap) continue;
      if (run.explored.count(e.period)) continue;
      eligible.push_back(e.period);
    }
    if (eligible.empty()) {
      LoopEvent ev;
      ev.kind = LoopEvent::Kind::Error;
      ev.iteration = iteration;
      ev.attempts = 0;
      ev.memory_size = run.cm.size();
      ev.note = "no unexplored period left to descend into";
      run.events.push_back(std::move(ev));
      break;
    }

    std::optional<LocateInstructResponse> target = reasoned_call<LocateInstructResponse>(
        reasoner_, options_, LoopEvent::Kind::Locate, iteration, run.cm.size(),
        [&] {
          return render_with([&](const MemoryList& view) {
            return render_locate_and_instruct_prompt(view, question, run.explored,
                                                     video.duration_s);
          });
        },
        [&](const std::string& raw) { return parse_locate_and_instruct(raw, eligible); },
        kLocateInstructSchemaHint, run.events);
    if (!target) break;  // unrecoverable locate reply: go straight to the forced answer
    run.events.back().period = target->period;

    explore(run, *target);

    answer = answer_check(LoopEvent::Kind::Answer, false);
    if (answer && answer->confidence) return finish(*answer, false);
  }

  std::optional<AnswerResponse> forced = answer_check(LoopEvent::Kind::ForcedAnswer, true);
  if (forced) return finish(*forced, true);

  AnswerResponse none;
  none.reason = "forced answer was unparseable after repair retries";
  return finish(none, true);
}

std::string Pipeline::write_trace(const Run& run, const FinalResponse& response) const {
  nlohmann::json events = nlohmann::json::array();
  for (const LoopEvent& ev : response.events) {
    nlohmann::json je = {
        {"kind", to_string(ev.kind)},
        {"iteration", ev.iteration},
        {"period", period_json(ev.period)},
        {"level", ev.level ? nlohmann::json(to_string(*ev.level)) : nlohmann::json(nullptr)},
        {"attempts", ev.attempts},
        {"prompt_chars", ev.prompt_chars},
        {"response_chars", ev.response_chars},
        {"wall_ms", ev.wall_ms},
        {"memory_size", ev.memory_size},
        {"note", ev.note},
    };
    events.push_back(std::move(je));
  }
  nlohmann::json evidence = nlohmann::json::array();
  for (const TimePeriod& p : response.answer.periods) evidence.push_back(period_json(p));

  nlohmann::json doc = {
      {"video_id", run.video.video_id},
      {"question", run.question},
      {"question_hash", fnv1a64_hex(run.question)},
      {"answer",
       {{"text", response.answer.answer},
        {"confident", response.answer.confidence},
        {"periods", std::move(evidence)},
        {"reason", response.answer.reason}}},
      {"forced", response.forced},
      {"iterations_used", response.iterations_used},
      {"ledger",
       {{"logical_reasoning", response.ledger.logical_reasoning},
        {"physical_reasoning", response.ledger.physical_reasoning},
        {"caption_calls", response.ledger.caption_calls}}},
      {"events", std::move(events)},
  };

  std::filesystem::create_directories(*options_.trace_dir);
  const std::filesystem::path path =
      *options_.trace_dir /
      (run.video.video_id + "." + fnv1a64_hex(run.question) + ".trace.json");
  std::ofstream out(path);
  if (!out) throw Error("cannot write trace file: " + path.string());
  out << doc.dump(2) << "\n";
  return path.string();
}

}  // namespace lucy
