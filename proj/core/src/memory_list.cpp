#include "lucy/memory_list.hpp"

#include <algorithm>
#include <tuple>

namespace lucy {

namespace {

// Canonical ordering key. end_s participates only to keep the order total.
std::tuple<std::int64_t, int, std::int64_t> key_of(const TimePeriod& p, MemoryLevel level) {
  return {p.start_s, static_cast<int>(level), p.end_s};
}

}  // namespace

void MemoryList::upsert(MemoryEntry entry) {
  const auto key = key_of(entry.period, entry.level);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const MemoryEntry& e, const auto& k) {
                               return key_of(e.period, e.level) < k;
                             });
  if (it != entries_.end() && it->period == entry.period && it->level == entry.level) {
    entry.revision = it->revision + 1;
    *it = std::move(entry);
    return;
  }
  entries_.insert(it, std::move(entry));
}

const MemoryEntry* MemoryList::find(const TimePeriod& period, MemoryLevel level) const {
  const auto key = key_of(period, level);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const MemoryEntry& e, const auto& k) {
                               return key_of(e.period, e.level) < k;
                             });
  if (it != entries_.end() && it->period == period && it->level == level) return &*it;
  return nullptr;
}

MemoryList MemoryList::filter_by_periods(const PeriodSet& keep) const {
  MemoryList out;
  out.entries_.reserve(entries_.size());
  for (const MemoryEntry& e : entries_) {
    if (keep.count(e.period)) out.entries_.push_back(e);
  }
  return out;
}

std::vector<const MemoryEntry*> MemoryList::at_level(MemoryLevel level) const {
  std::vector<const MemoryEntry*> out;
  for (const MemoryEntry& e : entries_) {
    if (e.level == level) out.push_back(&e);
  }
  return out;
}

std::string render_entry(const MemoryEntry& entry) {
  std::string out;
  out.reserve(entry.text.size() + 32);
  out += '[';
  out += std::to_string(entry.period.start_s);
  out += " s – ";
  out += std::to_string(entry.period.end_s);
  out += " s] (";
  out += to_string(entry.level);
  out += "): ";
  out += entry.text;
  return out;
}

std::string render_for_prompt(const MemoryList& memory) {
  std::string out;
  bool first = true;
  for (const MemoryEntry& e : memory.entries()) {
    if (!first) out += '\n';
    out += render_entry(e);
    first = false;
  }
  return out;
}

}  // namespace lucy
