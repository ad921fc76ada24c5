#include <benchmark/benchmark.h>

#include <string>

#include "lucy/engine.hpp"
#include "lucy/eval.hpp"
#include "lucy/memory_list.hpp"
#include "lucy/parse.hpp"
#include "lucy/sim_world.hpp"
#include "lucy/time_model.hpp"

namespace {

void BM_Divide(benchmark::State& state) {
  const std::int64_t duration = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(lucy::divide(duration, 200));
}
BENCHMARK(BM_Divide)->Arg(2000)->Arg(20000)->Arg(200000);

lucy::MemoryList bench_memory(int entries) {
  lucy::MemoryList m;
  for (int i = 0; i < entries; ++i) {
    lucy::MemoryEntry e;
    e.period = {i * 200, (i + 1) * 200};
    e.level = lucy::MemoryLevel::Coarse;
    e.text = "A man crosses the lobby, checks the desk, and leaves through the side door.";
    m.upsert(e);
  }
  return m;
}

void BM_RenderForPrompt(benchmark::State& state) {
  const lucy::MemoryList m = bench_memory(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lucy::render_for_prompt(m));
}
BENCHMARK(BM_RenderForPrompt)->Arg(10)->Arg(100)->Arg(1000);

void BM_ExtractFirstDict(benchmark::State& state) {
  const std::string reply =
      "Sure, here is my analysis of the provided descriptions.\n\n"
      "{\"Confidence\": True, \"Answer\": \"B. the side door\", "
      "\"Time Period\": [(200, 210)], \"Reason\": \"One description states it.\"}\n\n"
      "Let me know if you need anything else.";
  for (auto _ : state) benchmark::DoNotOptimize(lucy::extract_first_dict(reply));
}
BENCHMARK(BM_ExtractFirstDict);

void BM_ShannonEntropy(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < static_cast<int>(state.range(0)); ++i)
    text += "the guard checks the side door at dawn ";
  for (auto _ : state) benchmark::DoNotOptimize(lucy::shannon_entropy(text));
}
BENCHMARK(BM_ShannonEntropy)->Arg(8)->Arg(64);

void BM_ScriptedAsk(benchmark::State& state) {
  const lucy::GeneratedWorld g = lucy::make_world(11);
  const lucy::ScopeConfig scope;
  const std::string question = lucy::render_question(g.qa.stem, g.qa.options);
  for (auto _ : state) {
    lucy::ScriptedCaptioner captioner(g.world, scope);
    lucy::ScriptedReasoner reasoner;
    lucy::Pipeline pipeline(reasoner, captioner, scope);
    benchmark::DoNotOptimize(
        pipeline.ask({g.world.video_id, "sim://bench", g.world.duration_s}, question));
  }
}
BENCHMARK(BM_ScriptedAsk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
