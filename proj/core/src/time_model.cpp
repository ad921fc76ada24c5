#include "lucy/time_model.hpp"

#include <algorithm>
#include <stdexcept>

#include "lucy/errors.hpp"

namespace lucy {

const char* to_string(MemoryLevel level) {
  switch (level) {
    case MemoryLevel::Coarse: return "coarse";
    case MemoryLevel::Fine: return "fine";
    case MemoryLevel::UltraFine: return "ultra-fine";
  }
  return "coarse";
}

std::optional<MemoryLevel> level_from_string(const std::string& name) {
  if (name == "coarse") return MemoryLevel::Coarse;
  if (name == "fine") return MemoryLevel::Fine;
  if (name == "ultra-fine" || name == "ultrafine") return MemoryLevel::UltraFine;
  return std::nullopt;
}

std::string Fps::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::int64_t overlap_s(const TimePeriod& a, const TimePeriod& b) {
  const std::int64_t lo = std::max(a.start_s, b.start_s);
  const std::int64_t hi = std::min(a.end_s, b.end_s);
  return hi > lo ? hi - lo : 0;
}

bool ClipDivision::contains(const TimePeriod& p) const {
  return index_of(p).has_value();
}

std::optional<std::size_t> ClipDivision::index_of(const TimePeriod& p) const {
  const auto it = std::lower_bound(periods.begin(), periods.end(), p);
  if (it != periods.end() && *it == p) {
    return static_cast<std::size_t>(it - periods.begin());
  }
  return std::nullopt;
}

ClipDivision divide(std::int64_t duration_s, std::int64_t scope_s) {
  if (duration_s <= 0) throw std::invalid_argument("divide: duration_s must be positive");
  if (scope_s <= 0) throw std::invalid_argument("divide: scope_s must be positive");
  ClipDivision out;
  out.periods.reserve(static_cast<std::size_t>((duration_s + scope_s - 1) / scope_s));
  for (std::int64_t s = 0; s < duration_s; s += scope_s) {
    out.periods.push_back(TimePeriod{s, std::min(s + scope_s, duration_s)});
  }
  return out;
}

std::vector<TimePeriod> divide_period(const TimePeriod& parent, std::int64_t scope_s) {
  if (!parent.valid()) throw std::invalid_argument("divide_period: invalid parent period");
  const ClipDivision rel = divide(parent.duration_s(), scope_s);
  std::vector<TimePeriod> out;
  out.reserve(rel.periods.size());
  for (const TimePeriod& p : rel.periods) {
    out.push_back(TimePeriod{parent.start_s + p.start_s, parent.start_s + p.end_s});
  }
  return out;
}

std::vector<TimePeriod> neighborhood_expand(const std::vector<TimePeriod>& selected,
                                            const ClipDivision& division) {
  PeriodSet keep;
  for (const TimePeriod& p : selected) {
    const auto idx = division.index_of(p);
    if (!idx) {
      throw MembershipError("neighborhood_expand: period [" + std::to_string(p.start_s) + ", " +
                            std::to_string(p.end_s) + ") is not a division member");
    }
    keep.insert(p);
    if (*idx > 0) keep.insert(division.periods[*idx - 1]);
    if (*idx + 1 < division.periods.size()) keep.insert(division.periods[*idx + 1]);
  }
  return {keep.begin(), keep.end()};
}

TimePeriod snap_to_candidates(std::int64_t start_s, std::int64_t end_s,
                              const std::vector<TimePeriod>& candidates) {
  const TimePeriod probe{start_s, end_s};
  std::int64_t best = 0;
  const TimePeriod* best_p = nullptr;
  for (const TimePeriod& c : candidates) {
    const std::int64_t ov = overlap_s(probe, c);
    if (ov > best) {
      best = ov;
      best_p = &c;
    }
  }
  if (!best_p) {
    throw OutOfRangeError("cannot snap (" + std::to_string(start_s) + ", " +
                          std::to_string(end_s) + ") onto any candidate period");
  }
  return *best_p;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

}  // namespace lucy
