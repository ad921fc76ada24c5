#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "lucy/engine.hpp"
#include "lucy/scope.hpp"
#include "lucy/time_model.hpp"

namespace lucy {

// How one agent role is fulfilled: a deterministic scripted agent driven by
// world annotations, or a chat-completions endpoint.
struct AgentConfig {
  std::string kind = "scripted";  // "scripted" or "http"
  std::string base_url;
  std::string model;
  std::string api_key_env = "LUCY_API_KEY";
};

struct RuntimeConfig {
  std::optional<std::string> preset_name;
  ScopeConfig scope;
  AgentConfig reasoner;
  AgentConfig captioner;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> trace_dir;
  std::optional<std::filesystem::path> video_dir;
  std::string decoder_tool = "ffmpeg";
  int caption_workers = 8;
  std::size_t context_budget_chars = 200000;
  int max_repairs = 2;
  std::optional<MemoryLevel> depth_cap;
  bool deterministic_trace = false;

  void validate() const;  // throws ConfigError
};

// "2", "1/4", or a bare number.
Fps fps_from_string(const std::string& text);

// Reads a config document. A "preset" name is applied first; an optional
// "scope" object then overrides individual scope fields. Unknown keys are
// rejected so typos fail loudly.
RuntimeConfig config_from_json(const nlohmann::json& j);
RuntimeConfig load_config(const std::filesystem::path& path);

EngineOptions engine_options(const RuntimeConfig& config);

}  // namespace lucy
