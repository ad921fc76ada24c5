#include "lucy/config.hpp"

#include <fstream>
#include <set>

#include "lucy/errors.hpp"

namespace lucy {

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
}

AgentConfig agent_from_json(const nlohmann::json& j, const std::string& where) {
  reject_unknown_keys(j, {"kind", "base_url", "model", "api_key_env"}, where);
  AgentConfig a;
  a.kind = j.value("kind", a.kind);
  a.base_url = j.value("base_url", a.base_url);
  a.model = j.value("model", a.model);
  a.api_key_env = j.value("api_key_env", a.api_key_env);
  if (a.kind != "scripted" && a.kind != "http")
    throw ConfigError(where + ".kind must be \"scripted\" or \"http\"");
  if (a.kind == "http" && (a.base_url.empty() || a.model.empty()))
    throw ConfigError(where + " needs base_url and model for an http agent");
  return a;
}

MemoryLevel level_from_config(const std::string& name) {
  std::optional<MemoryLevel> level = level_from_string(name);
  if (!level) throw ConfigError("unknown memory level \"" + name + "\"");
  return *level;
}

void apply_scope_overrides(ScopeConfig& scope, const nlohmann::json& j) {
  reject_unknown_keys(
      j, {"t_coarse_s", "t_fine_s", "t_ultrafine_s", "fps", "init_relevant_count", "max_iterations"},
      "scope");
  scope.t_coarse_s = j.value("t_coarse_s", scope.t_coarse_s);
  scope.t_fine_s = j.value("t_fine_s", scope.t_fine_s);
  scope.t_ultrafine_s = j.value("t_ultrafine_s", scope.t_ultrafine_s);
  scope.init_relevant_count = j.value("init_relevant_count", scope.init_relevant_count);
  scope.max_iterations = j.value("max_iterations", scope.max_iterations);
  if (j.contains("fps")) {
    const nlohmann::json& fj = j.at("fps");
    reject_unknown_keys(fj, {"coarse", "fine", "ultra_fine"}, "scope.fps");
    auto read = [&fj](const char* key, MemoryLevel level, ScopeConfig& s) {
      if (!fj.contains(key)) return;
      const nlohmann::json& v = fj.at(key);
      s.fps_per_level[level] =
          v.is_string() ? fps_from_string(v.get<std::string>()) : Fps{v.get<int>(), 1};
    };
    read("coarse", MemoryLevel::Coarse, scope);
    read("fine", MemoryLevel::Fine, scope);
    read("ultra_fine", MemoryLevel::UltraFine, scope);
  }
}

}  // namespace

Fps fps_from_string(const std::string& text) {
  const std::size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      const int num = std::stoi(text);
      if (num <= 0) throw ConfigError("fps must be positive: " + text);
      return Fps{num, 1};
    }
    const int num = std::stoi(text.substr(0, slash));
    const int den = std::stoi(text.substr(slash + 1));
    if (num <= 0 || den <= 0) throw ConfigError("fps must be positive: " + text);
    return Fps{num, den};
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse fps value \"" + text + "\"");
  }
}

void RuntimeConfig::validate() const {
  scope.validate();
  if (caption_workers < 1) throw ConfigError("caption_workers must be at least 1");
  if (max_repairs < 0) throw ConfigError("max_repairs must not be negative");
  if (context_budget_chars < 1000) throw ConfigError("context_budget_chars is unusably small");
  if (decoder_tool.empty()) throw ConfigError("decoder_tool must not be empty");
}

RuntimeConfig config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"preset", "scope", "reasoner", "captioner", "cache_dir", "trace_dir",
                       "video_dir", "decoder_tool", "caption_workers", "context_budget_chars",
                       "max_repairs", "depth_cap", "deterministic_trace"},
                      "config");
  RuntimeConfig c;
  if (j.contains("preset")) {
    c.preset_name = j.at("preset").get<std::string>();
    c.scope = preset(*c.preset_name);
  }
  if (j.contains("scope")) apply_scope_overrides(c.scope, j.at("scope"));
  if (j.contains("reasoner")) c.reasoner = agent_from_json(j.at("reasoner"), "reasoner");
  if (j.contains("captioner")) c.captioner = agent_from_json(j.at("captioner"), "captioner");
  if (j.contains("cache_dir")) c.cache_dir = j.at("cache_dir").get<std::string>();
  if (j.contains("trace_dir")) c.trace_dir = j.at("trace_dir").get<std::string>();
  if (j.contains("video_dir")) c.video_dir = j.at("video_dir").get<std::string>();
  c.decoder_tool = j.value("decoder_tool", c.decoder_tool);
  c.caption_workers = j.value("caption_workers", c.caption_workers);
  c.context_budget_chars = j.value("context_budget_chars", c.context_budget_chars);
  c.max_repairs = j.value("max_repairs", c.max_repairs);
  if (j.contains("depth_cap"))
    c.depth_cap = level_from_config(j.at("depth_cap").get<std::string>());
  c.deterministic_trace = j.value("deterministic_trace", c.deterministic_trace);
  c.validate();
  return c;
}

RuntimeConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

EngineOptions engine_options(const RuntimeConfig& config) {
  EngineOptions options;
  options.cache_dir = config.cache_dir;
  options.trace_dir = config.trace_dir;
  options.caption_workers = config.caption_workers;
  options.context_budget_chars = config.context_budget_chars;
  options.max_repairs = config.max_repairs;
  options.depth_cap = config.depth_cap;
  options.deterministic_trace = config.deterministic_trace;
  return options;
}

}  // namespace lucy
