#include "lucy/media.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lucy/errors.hpp"

namespace lucy {

namespace fs = std::filesystem;
using nlohmann::json;

FramePlan plan_frames(const TimePeriod& period, Fps fps) {
  if (!period.valid()) throw MediaError("plan_frames: invalid period");
  if (fps.num <= 0 || fps.den <= 0) throw MediaError("plan_frames: fps must be positive");
  const std::int64_t dur = period.duration_s();
  FramePlan plan;
  const std::int64_t exact = (dur * fps.num) / fps.den;  // floor for positives
  plan.count = static_cast<std::size_t>(std::max<std::int64_t>(1, exact));
  const double spacing = static_cast<double>(fps.den) / fps.num;
  for (std::size_t i = 0; i < plan.count; ++i) {
    plan.timestamps_s.push_back(static_cast<double>(period.start_s) +
                                (static_cast<double>(i) + 0.5) * spacing);
  }
  if (plan.count == 1 && plan.timestamps_s[0] >= static_cast<double>(period.end_s)) {
    plan.timestamps_s[0] = static_cast<double>(period.start_s) + static_cast<double>(dur) / 2.0;
  }
  return plan;
}

FrameExtractor::FrameExtractor(fs::path tool_path) : tool_(std::move(tool_path)) {}

std::vector<std::string> FrameExtractor::command_for(const VideoMeta& video,
                                                     const TimePeriod& period, Fps fps,
                                                     const fs::path& out_dir) const {
  // Longest-side cap keeps portrait and landscape inputs under 768 px.
  const std::string scale =
      "scale=w='if(gt(iw,ih),min(iw,768),-2)':h='if(gt(iw,ih),-2,min(ih,768))'";
  return {
      tool_.string(),
      "-y",
      "-loglevel", "error",
      "-ss", std::to_string(period.start_s),
      "-t", std::to_string(period.duration_s()),
      "-i", video.source,
      "-vf", "fps=" + fps.str() + "," + scale,
      "-qscale:v", "4",
      (out_dir / "frame_%06d.jpg").string(),
  };
}

namespace {

std::string shell_quote(const std::string& arg) {
  std::string out = "'";
  for (const char c : arg) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& stem) {
    static std::atomic<std::uint64_t> counter{0};
    path = fs::temp_directory_path() /
           (stem + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

FrameSet FrameExtractor::extract(const VideoMeta& video, const TimePeriod& period, Fps fps) {
  const FramePlan plan = plan_frames(period, fps);
  TempDir dir("lucy-frames");
  const fs::path stderr_path = dir.path / "decoder.stderr";

  std::string cmd;
  for (const std::string& arg : command_for(video, period, fps, dir.path)) {
    if (!cmd.empty()) cmd += ' ';
    cmd += shell_quote(arg);
  }
  cmd += " 2> " + shell_quote(stderr_path.string());

  const int status = std::system(cmd.c_str());
  if (status != 0) {
    throw MediaError("frame decoder failed (status " + std::to_string(status) +
                     ") for clip [" + std::to_string(period.start_s) + ", " +
                     std::to_string(period.end_s) + "): " + read_file(stderr_path));
  }

  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir.path)) {
    if (e.path().extension() == ".jpg") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw MediaError("frame decoder produced no frames for clip [" +
                     std::to_string(period.start_s) + ", " + std::to_string(period.end_s) +
                     "): " + read_file(stderr_path));
  }

  FrameSet out;
  const std::size_t n = std::min(files.size(), plan.count);
  for (std::size_t i = 0; i < n; ++i) {
    out.frames.push_back(read_file(files[i]));
    out.timestamps_s.push_back(plan.timestamps_s[i]);
  }
  return out;
}

// --- memory cache -----------------------------------------------------------

namespace {

std::mutex& store_mutex_for(const std::string& video_id) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::mutex> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  return registry[video_id];
}

}  // namespace

fs::path cache_path(const fs::path& dir, const std::string& video_id) {
  return dir / (video_id + ".memory.jsonl");
}

MemoryList cache_load(const fs::path& dir, const std::string& video_id,
                      std::vector<std::string>* warnings) {
  const fs::path path = cache_path(dir, video_id);
  MemoryList out;
  std::ifstream in(path);
  if (!in) return out;

  std::string line;
  std::size_t lineno = 0;
  const auto warn = [&](const std::string& why) {
    if (warnings) {
      warnings->push_back(path.filename().string() + ":" + std::to_string(lineno) + ": " + why);
    }
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      warn("not a JSON object, record skipped");
      continue;
    }
    try {
      MemoryEntry e;
      e.video_id = j.at("video_id").get<std::string>();
      e.period.start_s = j.at("start_s").get<std::int64_t>();
      e.period.end_s = j.at("end_s").get<std::int64_t>();
      const auto level = level_from_string(j.at("level").get<std::string>());
      if (!level) {
        warn("unknown level, record skipped");
        continue;
      }
      e.level = *level;
      e.text = j.at("text").get<std::string>();
      e.instruction = j.at("instruction").get<std::string>();
      e.revision = j.at("revision").get<std::int64_t>();
      if (e.video_id != video_id) {
        warn("record belongs to video '" + e.video_id + "', skipped");
        continue;
      }
      if (!e.period.valid() || e.text.empty()) {
        warn("invalid period or empty text, record skipped");
        continue;
      }
      if (out.find(e.period, e.level)) {
        warn("duplicate (period, level) key, record skipped");
        continue;
      }
      out.upsert(std::move(e));
    } catch (const json::exception& ex) {
      warn(std::string("missing or mistyped field (") + ex.what() + "), record skipped");
    }
  }
  return out;
}

void cache_store(const fs::path& dir, const std::string& video_id, const MemoryList& memory) {
  std::lock_guard<std::mutex> lock(store_mutex_for(video_id));
  fs::create_directories(dir);
  const fs::path path = cache_path(dir, video_id);
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());

  {
    std::ofstream outf(tmp, std::ios::binary | std::ios::trunc);
    if (!outf) throw CacheError("cannot open cache temp file " + tmp.string());
    for (const MemoryEntry& e : memory.entries()) {
      json j{
          {"video_id", video_id},
          {"start_s", e.period.start_s},
          {"end_s", e.period.end_s},
          {"level", to_string(e.level)},
          {"text", e.text},
          {"instruction", e.instruction},
          {"revision", e.revision},
      };
      outf << j.dump() << '\n';
    }
    if (!outf.good()) throw CacheError("failed writing cache temp file " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string base64_encode(const std::string& bytes) {
  static const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 2 < bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out += alphabet[(v >> 18) & 63];
    out += alphabet[(v >> 12) & 63];
    out += alphabet[(v >> 6) & 63];
    out += alphabet[v & 63];
    i += 3;
  }
  if (i + 1 == bytes.size()) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out += alphabet[(v >> 18) & 63];
    out += alphabet[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out += alphabet[(v >> 18) & 63];
    out += alphabet[(v >> 12) & 63];
    out += alphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

}  // namespace lucy
