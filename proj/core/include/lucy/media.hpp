#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lucy/memory_list.hpp"
#include "lucy/scope.hpp"
#include "lucy/time_model.hpp"

namespace lucy {

// Encoded frames plus the second at which each was sampled.
struct FrameSet {
  std::vector<std::string> frames;  // encoded image bytes
  std::vector<double> timestamps_s;
};

// Deterministic sampling schedule for a clip: uniform spacing 1/fps with a
// half-interval phase offset, count = max(1, floor(duration * fps)). When
// the phase offset would fall past a very short clip, the single sample
// moves to the clip midpoint so every timestamp stays inside the period.
struct FramePlan {
  std::size_t count = 0;
  std::vector<double> timestamps_s;
};

FramePlan plan_frames(const TimePeriod& period, Fps fps);

// Source of frames for the captioning backend. Media-backed and synthetic
// implementations are interchangeable.
class FrameProvider {
 public:
  virtual ~FrameProvider() = default;
  virtual FrameSet extract(const VideoMeta& video, const TimePeriod& period, Fps fps) = 0;
};

// Shells out to an external decoder (ffmpeg-compatible argument set) to cut
// a clip into JPEG frames: quality-capped, longest side bounded at 768 px.
// Throws MediaError with captured stderr on failure.
class FrameExtractor : public FrameProvider {
 public:
  explicit FrameExtractor(std::filesystem::path tool_path);

  FrameSet extract(const VideoMeta& video, const TimePeriod& period, Fps fps) override;

  // The exact command line used, for logging and for substitutable stubs.
  std::vector<std::string> command_for(const VideoMeta& video, const TimePeriod& period, Fps fps,
                                       const std::filesystem::path& out_dir) const;

 private:
  std::filesystem::path tool_;
};

// --- memory cache -----------------------------------------------------------
//
// One JSONL file per video: <dir>/<video_id>.memory.jsonl, one entry per
// line with fields {video_id, start_s, end_s, level, text, instruction,
// revision}. Store is atomic (temp file + rename) and serialized per
// video_id. Malformed or foreign lines are skipped and reported through
// `warnings`, never silently dropped.

std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& video_id);

MemoryList cache_load(const std::filesystem::path& dir, const std::string& video_id,
                      std::vector<std::string>* warnings = nullptr);

void cache_store(const std::filesystem::path& dir, const std::string& video_id,
                 const MemoryList& memory);

std::string base64_encode(const std::string& bytes);

}  // namespace lucy
