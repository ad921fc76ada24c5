#pragma once

#include <string>

#include "lucy/backend.hpp"
#include "lucy/media.hpp"

namespace lucy {

// Retries apply to 5xx responses only; 4xx and transport failures are
// immediately fatal.
struct RetryPolicy {
  int max_retries = 3;
  int initial_delay_ms = 250;
  double backoff_factor = 2.0;
};

struct HttpBackendConfig {
  std::string base_url;  // e.g. "http://localhost:8000"
  std::string model;
  std::string api_key_env = "LUCY_API_KEY";
  int connect_timeout_s = 10;
  int read_timeout_s = 120;
  RetryPolicy retry;
};

// Chat-completions client for reasoning calls. POSTs
// {base_url}/v1/chat/completions with a single user message and returns
// choices[0].message.content. Throws BackendError on transport or envelope
// failure.
class HttpTextBackend : public TextBackend {
 public:
  explicit HttpTextBackend(HttpBackendConfig config);

 protected:
  std::string do_complete(const std::string& prompt, const DecodeParams& params) override;

 private:
  HttpBackendConfig config_;
  std::string api_key_;
};

// Chat-completions client for caption calls. The user message content is a
// parts array: one text part with the instruction followed by one
// base64 JPEG data-URL image part per sampled frame.
class HttpCaptionBackend : public CaptionBackend {
 public:
  HttpCaptionBackend(HttpBackendConfig config, FrameProvider& frames);

 protected:
  std::string do_caption(const ClipRequest& request) override;

 private:
  HttpBackendConfig config_;
  std::string api_key_;
  FrameProvider& frames_;
};

}  // namespace lucy
