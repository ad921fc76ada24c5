#include "lucy/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "lucy/errors.hpp"

namespace lucy {

using nlohmann::json;

namespace {

std::string read_api_key(const std::string& env_name) {
  const char* v = std::getenv(env_name.c_str());
  return v ? std::string(v) : std::string();
}

// POSTs one chat-completions body, retrying 5xx responses with exponential
// backoff, and unwraps choices[0].message.content.
std::string post_chat(const HttpBackendConfig& config, const std::string& api_key,
                      const json& body) {
  httplib::Client client(config.base_url);
  client.set_connection_timeout(config.connect_timeout_s, 0);
  client.set_read_timeout(config.read_timeout_s, 0);

  httplib::Headers headers;
  if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

  const std::string payload = body.dump();
  int delay_ms = config.retry.initial_delay_ms;
  httplib::Result res{nullptr, httplib::Error::Success};

  for (int attempt = 0;; ++attempt) {
    res = client.Post("/v1/chat/completions", headers, payload, "application/json");
    if (!res) {
      throw BackendError("POST " + config.base_url + "/v1/chat/completions failed: " +
                         httplib::to_string(res.error()));
    }
    if (res->status < 500) break;
    if (attempt >= config.retry.max_retries) {
      throw BackendError("backend kept failing with status " + std::to_string(res->status) +
                         " after " + std::to_string(attempt + 1) + " attempts");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    delay_ms = static_cast<int>(delay_ms * config.retry.backoff_factor);
  }

  if (res->status != 200) {
    throw BackendError("backend returned status " + std::to_string(res->status) + ": " +
                       res->body.substr(0, 500));
  }

  const json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw BackendError("backend returned non-JSON body");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw BackendError("backend reply missing choices[0].message.content");
  }
}

}  // namespace

HttpTextBackend::HttpTextBackend(HttpBackendConfig config)
    : config_(std::move(config)), api_key_(read_api_key(config_.api_key_env)) {}

std::string HttpTextBackend::do_complete(const std::string& prompt, const DecodeParams& params) {
  const json body{
      {"model", config_.model},
      {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params.temperature},
  };
  return post_chat(config_, api_key_, body);
}

HttpCaptionBackend::HttpCaptionBackend(HttpBackendConfig config, FrameProvider& frames)
    : config_(std::move(config)), api_key_(read_api_key(config_.api_key_env)), frames_(frames) {}

std::string HttpCaptionBackend::do_caption(const ClipRequest& request) {
  FrameSet frames;
  try {
    frames = frames_.extract(request.video, request.period, request.fps);
  } catch (const MediaError& e) {
    throw CaptionError(std::string("frame extraction failed: ") + e.what(),
                       request.period.start_s, request.period.end_s);
  }

  json parts = json::array();
  parts.push_back(json{{"type", "text"}, {"text", request.instruction}});
  for (const std::string& frame : frames.frames) {
    parts.push_back(json{
        {"type", "image_url"},
        {"image_url", json{{"url", "data:image/jpeg;base64," + base64_encode(frame)}}},
    });
  }

  const json body{
      {"model", config_.model},
      {"messages", json::array({json{{"role", "user"}, {"content", parts}}})},
      {"temperature", 0.0},
  };

  std::string caption;
  try {
    caption = post_chat(config_, api_key_, body);
  } catch (const BackendError& e) {
    throw CaptionError(e.what(), request.period.start_s, request.period.end_s);
  }
  if (caption.empty()) {
    throw CaptionError("caption backend returned an empty caption", request.period.start_s,
                       request.period.end_s);
  }
  return caption;
}

}  // namespace lucy
