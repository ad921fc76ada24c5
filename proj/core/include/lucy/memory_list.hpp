#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lucy/time_model.hpp"

namespace lucy {

// One captioned clip. Keyed by (period, level); text is the caption,
// instruction is the captioning prompt that produced it.
struct MemoryEntry {
  std::string video_id;
  TimePeriod period;
  MemoryLevel level = MemoryLevel::Coarse;
  std::string text;
  std::string instruction;
  std::int64_t revision = 0;

  bool operator==(const MemoryEntry&) const = default;
};

// Ordered collection of memory entries with map semantics on
// (period, level). Iteration order is canonical: start_s ascending, then
// level ascending, then end_s ascending. Plain value type; a copy is a
// consistent snapshot.
class MemoryList {
 public:
  // Inserts or replaces the entry with the same (period, level). Replacing
  // keeps the slot and bumps revision to old revision + 1.
  void upsert(MemoryEntry entry);

  const MemoryEntry* find(const TimePeriod& period, MemoryLevel level) const;

  // Keeps only entries whose period is in `keep`. Order is preserved.
  MemoryList filter_by_periods(const PeriodSet& keep) const;

  // Entries at one level, in canonical order.
  std::vector<const MemoryEntry*> at_level(MemoryLevel level) const;

  const std::vector<MemoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool operator==(const MemoryList&) const = default;

 private:
  std::vector<MemoryEntry> entries_;  // sorted by (start_s, level, end_s)
};

// Renders one entry as "[start s – end s] (level): text".
std::string render_entry(const MemoryEntry& entry);

// Newline-joined render of every entry in canonical order. Injective for
// distinct lists because period, level, and text are all part of the line.
std::string render_for_prompt(const MemoryList& memory);

}  // namespace lucy
