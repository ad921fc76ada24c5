#pragma once

#include <atomic>
#include <cstdint>
#include <string>

#include "lucy/scope.hpp"
#include "lucy/time_model.hpp"

namespace lucy {

struct DecodeParams {
  double temperature = 0.0;
};

// One captioning job: describe `period` of `video`, sampled at `fps`,
// following `instruction`.
struct ClipRequest {
  VideoMeta video;
  TimePeriod period;
  Fps fps;
  std::string instruction;
  MemoryLevel level = MemoryLevel::Coarse;
};

// Text completion backend. complete() is the only entry point and counts
// every invocation exactly once, so implementations only provide
// do_complete(). Counters are atomic; backends may be shared by workers.
class TextBackend {
 public:
  virtual ~TextBackend() = default;

  std::string complete(const std::string& prompt, const DecodeParams& params = {}) {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_complete(prompt, params);
  }

  std::int64_t calls() const { return calls_.load(std::memory_order_relaxed); }

 protected:
  virtual std::string do_complete(const std::string& prompt, const DecodeParams& params) = 0;

 private:
  std::atomic<std::int64_t> calls_{0};
};

// Video captioning backend, same ledger rules as TextBackend.
class CaptionBackend {
 public:
  virtual ~CaptionBackend() = default;

  std::string caption(const ClipRequest& request) {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_caption(request);
  }

  std::int64_t calls() const { return calls_.load(std::memory_order_relaxed); }

 protected:
  virtual std::string do_caption(const ClipRequest& request) = 0;

 private:
  std::atomic<std::int64_t> calls_{0};
};

}  // namespace lucy
