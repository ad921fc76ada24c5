#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "lucy/errors.hpp"
#include "lucy/media.hpp"

using namespace lucy;
namespace fs = std::filesystem;

namespace {

fs::path fake_decoder() {
  if (const char* env = std::getenv("LUCY_FAKE_DECODER")) return env;
  return fs::path(LUCY_TEST_DATA_DIR).parent_path() / "tools" / "fake_decoder.py";
}

fs::path fresh_dir(const char* tag) {
  const fs::path dir = fs::temp_directory_path() / (std::string("lucy_media_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

MemoryEntry entry(const char* vid, std::int64_t a, std::int64_t b, MemoryLevel lvl,
                  const char* text) {
  MemoryEntry e;
  e.video_id = vid;
  e.period = {a, b};
  e.level = lvl;
  e.text = text;
  e.instruction = "describe";
  return e;
}

}  // namespace

TEST_CASE("plan_frames counts floor(duration * fps) with a floor of one") {
  const FramePlan two_fps = plan_frames({0, 10}, {2, 1});
  REQUIRE(two_fps.count == 20);
  CHECK(two_fps.timestamps_s.front() == doctest::Approx(0.25));
  CHECK(two_fps.timestamps_s.back() == doctest::Approx(9.75));

  const FramePlan quarter = plan_frames({0, 10}, {1, 4});
  REQUIRE(quarter.count == 2);
  CHECK(quarter.timestamps_s[0] == doctest::Approx(2.0));
  CHECK(quarter.timestamps_s[1] == doctest::Approx(6.0));

  // too short for even one spaced sample: single frame at the midpoint
  const FramePlan clamped = plan_frames({5, 6}, {1, 4});
  REQUIRE(clamped.count == 1);
  CHECK(clamped.timestamps_s[0] == doctest::Approx(5.5));

  const FramePlan offset = plan_frames({200, 210}, {1, 1});
  REQUIRE(offset.count == 10);
  CHECK(offset.timestamps_s[0] == doctest::Approx(200.5));
}

TEST_CASE("plan_frames keeps every timestamp inside the clip") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> start(0, 5000);
  std::uniform_int_distribution<std::int64_t> len(1, 900);
  const std::vector<Fps> rates = {{1, 1}, {2, 1}, {4, 1}, {1, 2}, {1, 4}, {3, 7}};
  for (int i = 0; i < 3000; ++i) {
    const std::int64_t s = start(rng);
    const TimePeriod p{s, s + len(rng)};
    const Fps fps = rates[i % rates.size()];
    CAPTURE(p.start_s);
    CAPTURE(p.end_s);
    CAPTURE(fps.num);
    CAPTURE(fps.den);
    const FramePlan plan = plan_frames(p, fps);
    const std::int64_t expected =
        std::max<std::int64_t>(1, p.duration_s() * fps.num / fps.den);
    REQUIRE(plan.count == static_cast<std::size_t>(expected));
    REQUIRE(plan.timestamps_s.size() == plan.count);
    for (double t : plan.timestamps_s) {
      REQUIRE(t >= static_cast<double>(p.start_s));
      REQUIRE(t < static_cast<double>(p.end_s));
    }
    for (std::size_t k = 1; k < plan.timestamps_s.size(); ++k)
      REQUIRE(plan.timestamps_s[k] > plan.timestamps_s[k - 1]);
  }
}

TEST_CASE("plan_frames rejects bad input") {
  CHECK_THROWS_AS(plan_frames({10, 10}, {1, 1}), MediaError);
  CHECK_THROWS_AS(plan_frames({0, 10}, {0, 1}), MediaError);
  CHECK_THROWS_AS(plan_frames({0, 10}, {1, 0}), MediaError);
}

TEST_CASE("decoder command carries seek, length, rate, and scale cap") {
  const FrameExtractor x("ffmpeg");
  VideoMeta video{"vid", "/data/vid.mp4", 600};
  const auto cmd = x.command_for(video, {200, 400}, {1, 4}, "/tmp/out");
  REQUIRE(!cmd.empty());
  CHECK(cmd[0] == "ffmpeg");
  auto has_pair = [&](const std::string& flag, const std::string& value) {
    for (std::size_t i = 0; i + 1 < cmd.size(); ++i)
      if (cmd[i] == flag && cmd[i + 1] == value) return true;
    return false;
  };
  CHECK(has_pair("-ss", "200"));
  CHECK(has_pair("-t", "200"));
  CHECK(has_pair("-i", "/data/vid.mp4"));
  bool has_vf = false;
  for (std::size_t i = 0; i + 1 < cmd.size(); ++i) {
    if (cmd[i] == "-vf") {
      has_vf = true;
      CHECK(cmd[i + 1].find("fps=1/4") == 0);
      CHECK(cmd[i + 1].find("768") != std::string::npos);
    }
  }
  CHECK(has_vf);
  CHECK(cmd.back().find("/tmp/out") == 0);
  CHECK(cmd.back().find(".jpg") != std::string::npos);
}

TEST_CASE("frame extraction through the decoder stub") {
  FrameExtractor x(fake_decoder());
  VideoMeta video{"vid", "/data/clip.mp4", 600};

  const FrameSet frames = x.extract(video, {100, 110}, {2, 1});
  REQUIRE(frames.frames.size() == 20);
  REQUIRE(frames.timestamps_s.size() == 20);
  CHECK(frames.timestamps_s.front() == doctest::Approx(100.25));
  CHECK(frames.timestamps_s.back() == doctest::Approx(109.75));
  for (const std::string& f : frames.frames) {
    CHECK(!f.empty());
    CHECK(f.substr(0, 2) == "\xff\xd8");  // JPEG magic from the stub
  }

  const FrameSet single = x.extract(video, {0, 1}, {1, 4});
  CHECK(single.frames.size() == 1);
}

TEST_CASE("decoder failure surfaces stderr in the error") {
  FrameExtractor x(fake_decoder());
  VideoMeta video{"vid", "/data/explode.mp4", 600};
  try {
    x.extract(video, {0, 10}, {1, 1});
    FAIL("expected MediaError");
  } catch (const MediaError& e) {
    CHECK(std::string(e.what()).find("refusing to open") != std::string::npos);
  }
}

TEST_CASE("cache path is one jsonl file per video") {
  CHECK(cache_path("/var/cache", "vid-7") == fs::path("/var/cache/vid-7.memory.jsonl"));
}

TEST_CASE("cache round-trips a memory list") {
  const fs::path dir = fresh_dir("roundtrip");
  MemoryList m;
  m.upsert(entry("vid", 0, 200, MemoryLevel::Coarse, "coarse text"));
  m.upsert(entry("vid", 0, 10, MemoryLevel::Fine, "fine text"));
  MemoryEntry bumped = entry("vid", 0, 200, MemoryLevel::Coarse, "recaptioned");
  m.upsert(bumped);  // revision 1

  cache_store(dir, "vid", m);
  std::vector<std::string> warnings;
  const MemoryList loaded = cache_load(dir, "vid", &warnings);
  CHECK(warnings.empty());
  CHECK(loaded == m);

  // storing again replaces the file rather than appending
  cache_store(dir, "vid", m);
  CHECK(cache_load(dir, "vid") == m);
}

TEST_CASE("cache load skips malformed and foreign records with warnings") {
  const fs::path dir = fresh_dir("corrupt");
  MemoryList m;
  m.upsert(entry("vid", 0, 200, MemoryLevel::Coarse, "good"));
  cache_store(dir, "vid", m);

  std::ofstream out(cache_path(dir, "vid"), std::ios::app);
  out << "this is not json\n";
  out << R"({"video_id": "other", "start_s": 0, "end_s": 9, "level": "coarse", )"
      << R"("text": "foreign", "instruction": "", "revision": 0})" << "\n";
  out << R"({"video_id": "vid", "start_s": 9, "end_s": 5, "level": "coarse", )"
      << R"("text": "inverted", "instruction": "", "revision": 0})" << "\n";
  out << R"({"video_id": "vid", "start_s": 10, "end_s": 20, "level": "medium", )"
      << R"("text": "x", "instruction": "", "revision": 0})" << "\n";
  out << R"({"video_id": "vid", "start_s": 30, "end_s": 40, "level": "fine", )"
      << R"("revision": 0})" << "\n";
  out.close();

  std::vector<std::string> warnings;
  const MemoryList loaded = cache_load(dir, "vid", &warnings);
  CHECK(loaded == m);
  CHECK(warnings.size() == 5);
  for (const std::string& w : warnings) CHECK(w.find("skipped") != std::string::npos);
}

TEST_CASE("cache load of a missing file is an empty list") {
  std::vector<std::string> warnings;
  CHECK(cache_load(fresh_dir("missing"), "nope", &warnings).empty());
  CHECK(warnings.empty());
}

TEST_CASE("base64 encodes the reference vectors") {
  CHECK(base64_encode("") == "");
  CHECK(base64_encode("f") == "Zg==");
  CHECK(base64_encode("fo") == "Zm8=");
  CHECK(base64_encode("foo") == "Zm9v");
  CHECK(base64_encode("foob") == "Zm9vYg==");
  CHECK(base64_encode("fooba") == "Zm9vYmE=");
  CHECK(base64_encode("foobar") == "Zm9vYmFy");
  CHECK(base64_encode(std::string("\x00\xff\x10", 3)) == "AP8Q");
}
