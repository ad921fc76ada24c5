// Command-line front end: memorize / ask / eval / curve / simgen / needle.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration problem,
// 3 media or captioning failure, 4 backend transport or unparseable agent
// output, 5 context budget exceeded.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lucy/config.hpp"
#include "lucy/engine.hpp"
#include "lucy/errors.hpp"
#include "lucy/eval.hpp"
#include "lucy/http_backend.hpp"
#include "lucy/media.hpp"
#include "lucy/prompts.hpp"
#include "lucy/sim_world.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string preset_name;
  int max_iterations = 0;  // 0 = keep configured value
  bool as_json = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Path to a JSON config file");
  cmd->add_option("--preset", flags.preset_name,
                  "Scope preset name (overrides the config's scope)");
  cmd->add_option("--max-iters", flags.max_iterations,
                  "Override the exploration iteration cap");
  cmd->add_flag("--json", flags.as_json, "Machine-readable JSON output");
}

lucy::RuntimeConfig resolve_config(const CommonFlags& flags) {
  lucy::RuntimeConfig config;
  if (!flags.config_path.empty()) config = lucy::load_config(flags.config_path);
  if (!flags.preset_name.empty()) {
    lucy::ScopeConfig scope = lucy::preset(flags.preset_name);
    scope.max_iterations = config.scope.max_iterations;
    scope.init_relevant_count = config.scope.init_relevant_count;
    config.scope = scope;
    config.preset_name = flags.preset_name;
  }
  if (flags.max_iterations > 0) config.scope.max_iterations = flags.max_iterations;
  config.validate();
  return config;
}

struct VideoBundle {
  lucy::VideoMeta meta;
  std::optional<lucy::WorldSpec> world;
  std::vector<lucy::SimQA> qas;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// `video` is a world annotation file, a media file, or a bare id resolved
// under video_dir (<id>.world.json first, then <id>.mp4 with a
// <id>.meta.json sidecar carrying duration_s).
VideoBundle resolve_video(const lucy::RuntimeConfig& config, const std::string& video,
                          std::int64_t duration_flag) {
  VideoBundle bundle;
  fs::path path = video;
  if (!fs::exists(path) && config.video_dir) {
    const fs::path world_path = *config.video_dir / (video + ".world.json");
    const fs::path media_path = *config.video_dir / (video + ".mp4");
    if (fs::exists(world_path)) path = world_path;
    else if (fs::exists(media_path)) path = media_path;
  }
  if (!fs::exists(path))
    throw lucy::MediaError("video not found: " + video);

  if (ends_with(path.string(), ".world.json")) {
    bundle.world = lucy::load_world(path, &bundle.qas);
    bundle.meta.video_id = bundle.world->video_id;
    bundle.meta.source = path.string();
    bundle.meta.duration_s = bundle.world->duration_s;
    return bundle;
  }

  bundle.meta.video_id = path.stem().string();
  bundle.meta.source = path.string();
  if (duration_flag > 0) {
    bundle.meta.duration_s = duration_flag;
  } else {
    const fs::path sidecar = path.parent_path() / (path.stem().string() + ".meta.json");
    if (!fs::exists(sidecar))
      throw lucy::ConfigError("media file needs --duration or a " + sidecar.string() +
                              " sidecar with duration_s");
    std::ifstream in(sidecar);
    json j;
    try {
      in >> j;
      bundle.meta.duration_s = j.at("duration_s").get<std::int64_t>();
    } catch (const json::exception& e) {
      throw lucy::ConfigError("malformed sidecar " + sidecar.string() + ": " + e.what());
    }
  }
  return bundle;
}

struct Agents {
  std::unique_ptr<lucy::FrameProvider> frames;
  std::unique_ptr<lucy::TextBackend> reasoner;
  std::unique_ptr<lucy::CaptionBackend> captioner;
};

lucy::HttpBackendConfig http_config(const lucy::AgentConfig& agent) {
  lucy::HttpBackendConfig h;
  h.base_url = agent.base_url;
  h.model = agent.model;
  h.api_key_env = agent.api_key_env;
  return h;
}

Agents make_agents(const lucy::RuntimeConfig& config, const VideoBundle& video) {
  Agents agents;
  if (config.reasoner.kind == "http") {
    agents.reasoner = std::make_unique<lucy::HttpTextBackend>(http_config(config.reasoner));
  } else {
    std::vector<lucy::ScriptedRule> rules;
    for (const lucy::SimQA& qa : video.qas)
      rules.push_back({qa.stem, qa.answer_label.empty() ? qa.answer_text : qa.answer_label});
    agents.reasoner = std::make_unique<lucy::ScriptedReasoner>(std::move(rules));
  }
  if (config.captioner.kind == "http") {
    agents.frames = std::make_unique<lucy::FrameExtractor>(config.decoder_tool);
    agents.captioner =
        std::make_unique<lucy::HttpCaptionBackend>(http_config(config.captioner), *agents.frames);
  } else {
    if (!video.world)
      throw lucy::ConfigError(
          "the scripted captioner needs a world annotation file as the video source");
    agents.captioner = std::make_unique<lucy::ScriptedCaptioner>(*video.world, config.scope);
  }
  return agents;
}

std::string pick_question(const VideoBundle& video, const std::string& question_flag,
                          int qa_index) {
  if (!question_flag.empty()) return question_flag;
  if (qa_index < 0) throw lucy::ConfigError("provide --question or --qa");
  if (qa_index >= static_cast<int>(video.qas.size()))
    throw lucy::ConfigError("question index " + std::to_string(qa_index) +
                            " out of range: the world file has " +
                            std::to_string(video.qas.size()) + " questions");
  const lucy::SimQA& qa = video.qas[qa_index];
  return lucy::render_question(qa.stem, qa.options);
}

json response_to_json(const lucy::FinalResponse& r) {
  json evidence = json::array();
  for (const lucy::TimePeriod& p : r.answer.periods)
    evidence.push_back(json::array({p.start_s, p.end_s}));
  return {{"answer", r.answer.answer},
          {"confident", r.answer.confidence},
          {"evidence_periods", std::move(evidence)},
          {"reason", r.answer.reason},
          {"forced", r.forced},
          {"iterations_used", r.iterations_used},
          {"memory_entries", r.memory.size()},
          {"ledger",
           {{"logical_reasoning", r.ledger.logical_reasoning},
            {"physical_reasoning", r.ledger.physical_reasoning},
            {"caption_calls", r.ledger.caption_calls}}},
          {"trace_path", r.trace_path}};
}

void print_response(const lucy::FinalResponse& r) {
  std::cout << "answer: " << r.answer.answer << "\n";
  std::cout << "confident: " << (r.answer.confidence ? "yes" : "no")
            << (r.forced ? " (forced)" : "") << "\n";
  std::cout << "evidence:";
  if (r.answer.periods.empty()) std::cout << " (none)";
  for (const lucy::TimePeriod& p : r.answer.periods)
    std::cout << " [" << p.start_s << ", " << p.end_s << ")";
  std::cout << "\n";
  std::cout << "iterations: " << r.iterations_used << "\n";
  std::cout << "calls: " << r.ledger.logical_reasoning << " reasoning ("
            << r.ledger.physical_reasoning << " physical), " << r.ledger.caption_calls
            << " captions\n";
  if (!r.trace_path.empty()) std::cout << "trace: " << r.trace_path << "\n";
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// --- subcommand bodies -------------------------------------------------------

int run_memorize(const CommonFlags& flags, const std::string& video, std::int64_t duration) {
  lucy::RuntimeConfig config = resolve_config(flags);
  VideoBundle bundle = resolve_video(config, video, duration);
  Agents agents = make_agents(config, bundle);
  lucy::Pipeline pipeline(*agents.reasoner, *agents.captioner, config.scope,
                          lucy::engine_options(config));
  lucy::MemoryList coarse = pipeline.memorize(bundle.meta);
  if (flags.as_json) {
    json entries = json::array();
    for (const lucy::MemoryEntry& e : coarse.entries())
      entries.push_back({{"start_s", e.period.start_s},
                         {"end_s", e.period.end_s},
                         {"level", lucy::to_string(e.level)},
                         {"chars", e.text.size()},
                         {"revision", e.revision}});
    std::cout << json{{"video_id", bundle.meta.video_id},
                      {"duration_s", bundle.meta.duration_s},
                      {"entries", std::move(entries)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "memorized " << bundle.meta.video_id << ": " << coarse.size()
              << " coarse entries\n";
    for (const lucy::MemoryEntry& e : coarse.entries())
      std::cout << "  [" << e.period.start_s << ", " << e.period.end_s << ") "
                << e.text.size() << " chars\n";
  }
  return 0;
}

int run_ask(const CommonFlags& flags, const std::string& video, std::int64_t duration,
            const std::string& question_flag, int qa_index, bool dry_run) {
  lucy::RuntimeConfig config = resolve_config(flags);
  VideoBundle bundle = resolve_video(config, video, duration);
  const std::string question = pick_question(bundle, question_flag, qa_index);

  if (dry_run) {
    const lucy::ScopeConfig& s = config.scope;
    const std::int64_t coarse_clips = ceil_div(bundle.meta.duration_s, s.t_coarse_s);
    const std::int64_t per_coarse = 1 + ceil_div(s.t_coarse_s, s.t_fine_s);
    const std::int64_t per_fine = 1 + ceil_div(s.t_fine_s, s.t_ultrafine_s);
    const std::int64_t per_iteration = std::max(per_coarse, per_fine);
    const std::int64_t reasoning = 2 + 2 * static_cast<std::int64_t>(s.max_iterations) + 1;
    json plan = {{"video_id", bundle.meta.video_id},
                 {"duration_s", bundle.meta.duration_s},
                 {"coarse_clips", coarse_clips},
                 {"reasoning_calls_max", reasoning},
                 {"physical_reasoning_calls_max", reasoning * (1 + config.max_repairs)},
                 {"caption_calls_max", coarse_clips + s.max_iterations * per_iteration},
                 {"iteration_cap", s.max_iterations}};
    if (flags.as_json) {
      std::cout << plan.dump(2) << "\n";
    } else {
      std::cout << "dry run for " << bundle.meta.video_id << " (" << bundle.meta.duration_s
                << " s)\n";
      std::cout << "  coarse clips to memorize: " << coarse_clips << "\n";
      std::cout << "  reasoning calls (logical, worst case): " << reasoning << "\n";
      std::cout << "  reasoning calls (with repair retries): "
                << reasoning * (1 + config.max_repairs) << "\n";
      std::cout << "  caption calls (worst case): "
                << coarse_clips + s.max_iterations * per_iteration << "\n";
    }
    return 0;
  }

  Agents agents = make_agents(config, bundle);
  lucy::Pipeline pipeline(*agents.reasoner, *agents.captioner, config.scope,
                          lucy::engine_options(config));
  lucy::FinalResponse response = pipeline.ask(bundle.meta, question);
  if (flags.as_json) std::cout << response_to_json(response).dump(2) << "\n";
  else print_response(response);
  return 0;
}

int run_eval_cmd(const CommonFlags& flags, const std::string& questions_path, bool strict,
                 const std::string& out_dir) {
  lucy::RuntimeConfig config = resolve_config(flags);
  std::ifstream in(questions_path);
  if (!in) throw lucy::ConfigError("cannot read question set: " + questions_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw lucy::ConfigError("question set is not valid JSON: " + std::string(e.what()));
  }
  const std::vector<lucy::QARecord> records = lucy::qa_records_from_json(j);

  lucy::QuestionRunner runner = [&](const lucy::QARecord& record) {
    VideoBundle bundle = resolve_video(config, record.video_id, 0);
    Agents agents = make_agents(config, bundle);
    lucy::Pipeline pipeline(*agents.reasoner, *agents.captioner, config.scope,
                            lucy::engine_options(config));
    return pipeline.ask(bundle.meta, lucy::render_question(record.stem, record.options));
  };
  lucy::EvalReport report = lucy::run_eval(records, runner, strict);

  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  lucy::write_report_json(dir / "report.json", report);
  lucy::write_report_csv(dir / "report.csv", report);

  json summary = {{"total", report.total},
                  {"answered", report.answered},
                  {"correct", report.correct},
                  {"skipped", report.skipped},
                  {"accuracy", report.accuracy},
                  {"report_json", (dir / "report.json").string()},
                  {"report_csv", (dir / "report.csv").string()}};
  if (flags.as_json) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << "evaluated " << report.total << " questions: " << report.correct << "/"
              << report.answered << " correct";
    if (report.skipped > 0) std::cout << " (" << report.skipped << " skipped)";
    std::cout << ", accuracy " << report.accuracy << "\n";
    std::cout << "reports: " << (dir / "report.json").string() << ", "
              << (dir / "report.csv").string() << "\n";
  }
  return 0;
}

int run_curve(const CommonFlags& flags, const std::string& video, std::int64_t duration,
              const std::string& question_flag, int qa_index, const std::string& out_path) {
  lucy::RuntimeConfig config = resolve_config(flags);
  VideoBundle bundle = resolve_video(config, video, duration);
  const std::string question = pick_question(bundle, question_flag, qa_index);
  Agents agents = make_agents(config, bundle);
  lucy::Pipeline pipeline(*agents.reasoner, *agents.captioner, config.scope,
                          lucy::engine_options(config));
  lucy::FinalResponse response = pipeline.ask(bundle.meta, question);
  std::vector<lucy::CurveRow> rows = lucy::richness_relevance_curve(
      response.memory, question, *agents.reasoner, config.max_repairs);
  lucy::write_levels_csv(out_path, rows);

  if (flags.as_json) {
    json out = json::array();
    for (const lucy::CurveRow& row : rows)
      out.push_back({{"level", lucy::to_string(row.level)},
                     {"entries", row.entries},
                     {"mean_entropy", row.mean_entropy ? json(*row.mean_entropy) : json(nullptr)},
                     {"mean_relevance",
                      row.mean_relevance ? json(*row.mean_relevance) : json(nullptr)}});
    std::cout << json{{"levels", std::move(out)}, {"csv", out_path}}.dump(2) << "\n";
  } else {
    std::cout << "level        entries  mean_entropy  mean_relevance\n";
    for (const lucy::CurveRow& row : rows) {
      std::printf("%-12s %7zu  ", lucy::to_string(row.level), row.entries);
      if (row.mean_entropy) std::printf("%12.4f  ", *row.mean_entropy);
      else std::printf("%12s  ", "-");
      if (row.mean_relevance) std::printf("%14.4f\n", *row.mean_relevance);
      else std::printf("%14s\n", "-");
    }
    std::cout << "written: " << out_path << "\n";
  }
  return 0;
}

int run_simgen(const CommonFlags& flags, std::uint64_t seed, std::int64_t duration,
               const std::string& out_path, int needle_count, int qas_per_needle,
               const std::string& needle_out) {
  lucy::RuntimeConfig config = resolve_config(flags);
  lucy::WorldGenOptions options;
  options.duration_s = duration;
  options.scope = config.scope;
  lucy::GeneratedWorld generated = lucy::make_world(seed, options);
  lucy::save_world(out_path, generated.world, {generated.qa});
  if (!flags.as_json)
    std::cout << "world " << generated.world.video_id << " (" << duration << " s, "
              << generated.world.events.size() << " events) -> " << out_path << "\n";

  json summary = {{"world", out_path},
                  {"video_id", generated.world.video_id},
                  {"events", generated.world.events.size()},
                  {"question", generated.qa.stem},
                  {"answer_label", generated.qa.answer_label}};
  if (needle_count > 0) {
    if (needle_out.empty())
      throw lucy::ConfigError("--needles requires --needle-out for the fragment file");
    std::vector<lucy::NeedleSpec> needles =
        lucy::make_needles(seed ^ 0x9e3779b97f4a7c15ull, needle_count, qas_per_needle);
    std::ofstream out(needle_out);
    if (!out) throw lucy::ConfigError("cannot write needle file: " + needle_out);
    out << lucy::needles_to_json(needles).dump(2) << "\n";
    if (!flags.as_json)
      std::cout << needle_count << " needles (" << qas_per_needle << " questions each) -> "
                << needle_out << "\n";
    summary["needles"] = needle_out;
  }
  if (flags.as_json) std::cout << summary.dump(2) << "\n";
  return 0;
}

int run_needle(const CommonFlags& flags, const std::string& base_path,
               const std::string& needle_path, const std::vector<std::int64_t>& positions,
               const std::string& out_path, const std::string& media_source,
               std::int64_t media_duration, const std::vector<std::string>& media_clips,
               const std::string& plan_out) {
  resolve_config(flags);  // validates config/preset flags even though scope is unused

  if (!media_source.empty()) {
    std::vector<std::pair<std::string, std::int64_t>> clips;
    for (const std::string& spec : media_clips) {
      const std::size_t colon = spec.rfind(':');
      if (colon == std::string::npos)
        throw lucy::ConfigError("clip must look like path.mp4:LENGTH, got " + spec);
      clips.emplace_back(spec.substr(0, colon), std::stoll(spec.substr(colon + 1)));
    }
    json plan = lucy::make_splice_plan(media_source, media_duration, clips, positions);
    if (plan_out.empty()) {
      std::cout << plan.dump(2) << "\n";
    } else {
      std::ofstream out(plan_out);
      if (!out) throw lucy::ConfigError("cannot write splice plan: " + plan_out);
      out << plan.dump(2) << "\n";
      if (!flags.as_json) std::cout << "splice plan -> " << plan_out << "\n";
    }
    return 0;
  }

  lucy::WorldSpec base = lucy::load_world(base_path);
  std::ifstream in(needle_path);
  if (!in) throw lucy::ConfigError("cannot read needle file: " + needle_path);
  json nj;
  try {
    in >> nj;
  } catch (const json::exception& e) {
    throw lucy::ConfigError("needle file is not valid JSON: " + std::string(e.what()));
  }
  std::vector<lucy::NeedleSpec> needles = lucy::needles_from_json(nj);
  lucy::SpliceResult spliced = lucy::build_needle_haystack(base, needles, positions);
  lucy::save_world(out_path, spliced.world, spliced.qas);

  if (flags.as_json) {
    json periods = json::array();
    for (const lucy::TimePeriod& p : spliced.needle_periods)
      periods.push_back(json::array({p.start_s, p.end_s}));
    std::cout << json{{"world", out_path},
                      {"video_id", spliced.world.video_id},
                      {"duration_s", spliced.world.duration_s},
                      {"questions", spliced.qas.size()},
                      {"needle_periods", std::move(periods)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "spliced " << needles.size() << " needles into " << spliced.world.video_id
              << " (" << spliced.world.duration_s << " s, " << spliced.qas.size()
              << " questions) -> " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical video memory question answering"};
  app.require_subcommand(1);

  CommonFlags flags;

  // memorize
  auto* memorize = app.add_subcommand("memorize", "Build the coarse memory for a video");
  std::string video;
  std::int64_t duration = 0;
  add_common(memorize, flags);
  memorize->add_option("--video", video, "World file, media file, or video id")->required();
  memorize->add_option("--duration", duration, "Media duration in seconds");

  // ask
  auto* ask = app.add_subcommand("ask", "Answer one question about a video");
  std::string question;
  int qa_index = -1;
  bool dry_run = false;
  add_common(ask, flags);
  ask->add_option("--video", video, "World file, media file, or video id")->required();
  ask->add_option("--duration", duration, "Media duration in seconds");
  ask->add_option("--question", question, "Question text");
  ask->add_option("--qa", qa_index, "Index of an embedded world question");
  ask->add_flag("--dry-run", dry_run, "Print the planned call budget and exit");

  // eval
  auto* eval = app.add_subcommand("eval", "Run a question set and write reports");
  std::string questions_path, out_dir;
  bool strict = false;
  add_common(eval, flags);
  eval->add_option("--questions", questions_path, "QA records JSON file")->required();
  eval->add_flag("--strict", strict, "Fail on the first unanswerable record");
  eval->add_option("--out-dir", out_dir, "Directory for report.json / report.csv");

  // curve
  auto* curve = app.add_subcommand("curve", "Per-level entropy and relevance of a run's memory");
  std::string curve_out = "levels.csv";
  add_common(curve, flags);
  curve->add_option("--video", video, "World file, media file, or video id")->required();
  curve->add_option("--duration", duration, "Media duration in seconds");
  curve->add_option("--question", question, "Question text");
  curve->add_option("--qa", qa_index, "Index of an embedded world question");
  curve->add_option("--out", curve_out, "Output CSV path");

  // simgen
  auto* simgen = app.add_subcommand("simgen", "Generate a synthetic annotated video");
  std::uint64_t seed = 1;
  std::int64_t sim_duration = 2000;
  std::string sim_out = "sim.world.json", needle_out;
  int needle_count = 0, qas_per_needle = 4;
  add_common(simgen, flags);
  simgen->add_option("--seed", seed, "Generator seed");
  simgen->add_option("--duration", sim_duration, "World duration in seconds");
  simgen->add_option("--out", sim_out, "Output world file");
  simgen->add_option("--needles", needle_count, "Also generate this many needle fragments");
  simgen->add_option("--qas-per-needle", qas_per_needle, "Questions per needle fragment");
  simgen->add_option("--needle-out", needle_out, "Output needle fragment file");

  // needle
  auto* needle = app.add_subcommand("needle", "Splice needle clips into a base timeline");
  std::string base_path, needle_path, needle_world_out = "needled.world.json";
  std::string media_source, plan_out;
  std::int64_t media_duration = 0;
  std::vector<std::int64_t> positions;
  std::vector<std::string> media_clips;
  add_common(needle, flags);
  needle->add_option("--base", base_path, "Base world file");
  needle->add_option("--needle-file", needle_path, "Needle fragment file");
  needle->add_option("--positions", positions, "Insertion positions on the base timeline")
      ->required();
  needle->add_option("--out", needle_world_out, "Output spliced world file");
  needle->add_option("--media-source", media_source, "Base media file (cut-list mode)");
  needle->add_option("--media-duration", media_duration, "Base media duration in seconds");
  needle->add_option("--clips", media_clips, "Needle clips as path:LENGTH (cut-list mode)");
  needle->add_option("--plan-out", plan_out, "Output path for the cut list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (memorize->parsed()) return run_memorize(flags, video, duration);
    if (ask->parsed()) return run_ask(flags, video, duration, question, qa_index, dry_run);
    if (eval->parsed()) return run_eval_cmd(flags, questions_path, strict, out_dir);
    if (curve->parsed()) return run_curve(flags, video, duration, question, qa_index, curve_out);
    if (simgen->parsed())
      return run_simgen(flags, seed, sim_duration, sim_out, needle_count, qas_per_needle,
                        needle_out);
    if (needle->parsed())
      return run_needle(flags, base_path, needle_path, positions, needle_world_out, media_source,
                        media_duration, media_clips, plan_out);
  } catch (const lucy::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const lucy::MediaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const lucy::CaptionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const lucy::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const lucy::BackendError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const lucy::UnknownTemplateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const lucy::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lucy::TemplateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lucy::OverlapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lucy::MembershipError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lucy::CacheError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lucy::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
