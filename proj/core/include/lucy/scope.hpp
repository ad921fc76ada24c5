#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lucy/time_model.hpp"

namespace lucy {

// Temporal scopes and sampling rates for the three memory levels.
// Invariant: t_coarse_s > t_fine_s >= t_ultrafine_s >= 1. Equality is
// allowed at the bottom because one shipped preset pins both fine and
// ultra-fine to one second.
struct ScopeConfig {
  std::int64_t t_coarse_s = 200;
  std::int64_t t_fine_s = 10;
  std::int64_t t_ultrafine_s = 1;
  std::map<MemoryLevel, Fps> fps_per_level = {
      {MemoryLevel::Coarse, Fps{1, 1}},
      {MemoryLevel::Fine, Fps{2, 1}},
      {MemoryLevel::UltraFine, Fps{2, 1}},
  };
  int init_relevant_count = 3;
  int max_iterations = 5;

  void validate() const;  // throws ConfigError on violation

  std::int64_t scope_of(MemoryLevel level) const;
  Fps fps_of(MemoryLevel level) const;

  // Scope and level one step deeper than `level`; nullopt when terminal.
  std::optional<MemoryLevel> child_level(MemoryLevel level) const;

  bool operator==(const ScopeConfig&) const = default;
};

// Identity and duration of one video. `source` is a media URI or a path to
// a world annotation file; it is opaque to the memory machinery.
struct VideoMeta {
  std::string video_id;
  std::string source;
  std::int64_t duration_s = 0;
};

// Named scope presets for the supported benchmarks, e.g. "mlvu-short" or
// "egomem". Throws ConfigError for unknown names.
ScopeConfig preset(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace lucy
