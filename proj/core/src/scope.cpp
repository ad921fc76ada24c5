#include "lucy/scope.hpp"

#include "lucy/errors.hpp"

namespace lucy {

void ScopeConfig::validate() const {
  if (t_ultrafine_s < 1) throw ConfigError("scope: t_ultrafine_s must be >= 1");
  if (t_fine_s < t_ultrafine_s) throw ConfigError("scope: t_fine_s must be >= t_ultrafine_s");
  if (t_coarse_s <= t_fine_s) throw ConfigError("scope: t_coarse_s must be > t_fine_s");
  for (const auto& [level, fps] : fps_per_level) {
    if (fps.num <= 0 || fps.den <= 0) {
      throw ConfigError(std::string("scope: fps for ") + to_string(level) + " must be positive");
    }
  }
  for (MemoryLevel level : {MemoryLevel::Coarse, MemoryLevel::Fine, MemoryLevel::UltraFine}) {
    if (!fps_per_level.count(level)) {
      throw ConfigError(std::string("scope: missing fps for ") + to_string(level));
    }
  }
  if (init_relevant_count < 1) throw ConfigError("scope: init_relevant_count must be >= 1");
  if (max_iterations < 1) throw ConfigError("scope: max_iterations must be >= 1");
}

std::int64_t ScopeConfig::scope_of(MemoryLevel level) const {
  switch (level) {
    case MemoryLevel::Coarse: return t_coarse_s;
    case MemoryLevel::Fine: return t_fine_s;
    case MemoryLevel::UltraFine: return t_ultrafine_s;
  }
  return t_coarse_s;
}

Fps ScopeConfig::fps_of(MemoryLevel level) const {
  const auto it = fps_per_level.find(level);
  if (it == fps_per_level.end()) throw ConfigError("scope: missing fps entry");
  return it->second;
}

std::optional<MemoryLevel> ScopeConfig::child_level(MemoryLevel level) const {
  switch (level) {
    case MemoryLevel::Coarse: return MemoryLevel::Fine;
    case MemoryLevel::Fine: return MemoryLevel::UltraFine;
    case MemoryLevel::UltraFine: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

ScopeConfig make(std::int64_t tc, std::int64_t tf, std::int64_t tuf, Fps coarse_fps, Fps deep_fps) {
  ScopeConfig s;
  s.t_coarse_s = tc;
  s.t_fine_s = tf;
  s.t_ultrafine_s = tuf;
  s.fps_per_level = {
      {MemoryLevel::Coarse, coarse_fps},
      {MemoryLevel::Fine, deep_fps},
      {MemoryLevel::UltraFine, deep_fps},
  };
  return s;
}

ScopeConfig make_egomem() {
  ScopeConfig s;
  s.t_coarse_s = 800;
  s.t_fine_s = 80;
  s.t_ultrafine_s = 8;
  s.fps_per_level = {
      {MemoryLevel::Coarse, Fps{1, 4}},
      {MemoryLevel::Fine, Fps{1, 2}},
      {MemoryLevel::UltraFine, Fps{1, 1}},
  };
  return s;
}

}  // namespace

ScopeConfig preset(const std::string& name) {
  // Per-benchmark scopes, split by video length where the benchmark has
  // length buckets. Sampling is 1 fps coarse / 2 fps deeper except where
  // noted.
  if (name == "mlvu-short") return make(30, 5, 1, Fps{1, 1}, Fps{2, 1});
  if (name == "mlvu-medium") return make(60, 5, 1, Fps{1, 1}, Fps{2, 1});
  if (name == "mlvu-long") return make(100, 10, 1, Fps{1, 1}, Fps{2, 1});
  if (name == "mlvu-extra-long") return make(200, 10, 1, Fps{1, 1}, Fps{2, 1});
  if (name == "videomme-short") return make(5, 1, 1, Fps{2, 1}, Fps{4, 1});
  if (name == "videomme-medium") return make(50, 5, 1, Fps{1, 1}, Fps{2, 1});
  if (name == "videomme-long") return make(100, 10, 1, Fps{1, 1}, Fps{2, 1});
  if (name == "lvbench-short") return make(100, 10, 1, Fps{1, 1}, Fps{2, 1});
  if (name == "lvbench-medium") return make(150, 10, 1, Fps{1, 1}, Fps{2, 1});
  if (name == "lvbench-long") return make(200, 10, 1, Fps{1, 1}, Fps{2, 1});
  if (name == "egomem") return make_egomem();
  throw ConfigError("unknown preset: " + name);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "mlvu-short",    "mlvu-medium",    "mlvu-long",    "mlvu-extra-long",
      "videomme-short", "videomme-medium", "videomme-long",
      "lvbench-short", "lvbench-medium", "lvbench-long", "egomem",
  };
  return names;
}

}  // namespace lucy
