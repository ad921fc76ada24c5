#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lucy {

// Depth of a memory entry. Ordering is part of the contract: deeper levels
// compare greater.
enum class MemoryLevel : int { Coarse = 0, Fine = 1, UltraFine = 2 };

const char* to_string(MemoryLevel level);
std::optional<MemoryLevel> level_from_string(const std::string& name);

// Frames per second as an exact rational, so sub-1 rates (1/4 fps) stay
// exact in frame-count arithmetic.
struct Fps {
  int num = 1;
  int den = 1;

  double to_double() const { return static_cast<double>(num) / den; }
  std::string str() const;  // "2" or "1/4"
  auto operator<=>(const Fps&) const = default;
};

// Half-open interval [start_s, end_s) on the video timeline, whole seconds.
struct TimePeriod {
  std::int64_t start_s = 0;
  std::int64_t end_s = 0;

  std::int64_t duration_s() const { return end_s - start_s; }
  bool contains(std::int64_t second) const { return second >= start_s && second < end_s; }
  bool valid() const { return start_s >= 0 && start_s < end_s; }

  auto operator<=>(const TimePeriod&) const = default;
};

// Overlap length of two half-open periods, zero when disjoint.
std::int64_t overlap_s(const TimePeriod& a, const TimePeriod& b);

using PeriodSet = std::set<TimePeriod>;

// Contiguous partition of [0, duration_s) into clips of a fixed scope with
// one remainder clip at the tail.
struct ClipDivision {
  std::vector<TimePeriod> periods;

  std::size_t size() const { return periods.size(); }
  bool contains(const TimePeriod& p) const;
  std::optional<std::size_t> index_of(const TimePeriod& p) const;
};

// Splits [0, duration_s) into ceil(duration/scope) clips. All clips have
// length scope_s except possibly the last. duration_s and scope_s must be
// positive.
ClipDivision divide(std::int64_t duration_s, std::int64_t scope_s);

// Splits an arbitrary clip the same way, keeping absolute coordinates.
std::vector<TimePeriod> divide_period(const TimePeriod& parent, std::int64_t scope_s);

// Selected periods plus their immediate predecessor and successor within the
// division. Throws MembershipError if a selected period is not a member.
// Output is sorted, deduplicated, and always a superset of the selection.
std::vector<TimePeriod> neighborhood_expand(const std::vector<TimePeriod>& selected,
                                            const ClipDivision& division);

// Maps an agent-proposed (start, end) onto the candidate period with the
// largest overlap; ties resolve to the earliest candidate. Candidates must be
// sorted by start. Throws OutOfRangeError when nothing overlaps.
TimePeriod snap_to_candidates(std::int64_t start_s, std::int64_t end_s,
                              const std::vector<TimePeriod>& candidates);

// FNV-1a over bytes, used for stable question hashes in trace file names.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace lucy
