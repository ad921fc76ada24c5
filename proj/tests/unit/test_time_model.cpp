#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>

#include "lucy/errors.hpp"
#include "lucy/time_model.hpp"

using namespace lucy;

namespace {

// Straight-line reference: walk forward one scope at a time.
std::vector<TimePeriod> brute_divide(std::int64_t duration_s, std::int64_t scope_s) {
  std::vector<TimePeriod> out;
  for (std::int64_t start = 0; start < duration_s; start += scope_s)
    out.push_back({start, std::min(start + scope_s, duration_s)});
  return out;
}

}  // namespace

TEST_CASE("TimePeriod basics") {
  TimePeriod p{10, 20};
  CHECK(p.duration_s() == 10);
  CHECK(p.contains(10));
  CHECK(p.contains(19));
  CHECK_FALSE(p.contains(20));
  CHECK_FALSE(p.contains(9));
  CHECK(p.valid());
  CHECK_FALSE(TimePeriod{5, 5}.valid());
  CHECK_FALSE(TimePeriod{-1, 5}.valid());
  CHECK(TimePeriod{0, 1} < TimePeriod{0, 2});
  CHECK(TimePeriod{0, 9} < TimePeriod{1, 2});
}

TEST_CASE("overlap_s") {
  CHECK(overlap_s({0, 10}, {5, 15}) == 5);
  CHECK(overlap_s({5, 15}, {0, 10}) == 5);
  CHECK(overlap_s({0, 10}, {10, 20}) == 0);
  CHECK(overlap_s({0, 10}, {20, 30}) == 0);
  CHECK(overlap_s({0, 100}, {40, 60}) == 20);
  CHECK(overlap_s({3, 7}, {3, 7}) == 4);
}

TEST_CASE("divide partitions the timeline") {
  for (std::int64_t duration : {1, 5, 199, 200, 201, 999, 1000, 3600, 20000}) {
    for (std::int64_t scope : {1, 5, 10, 200}) {
      CAPTURE(duration);
      CAPTURE(scope);
      const ClipDivision d = divide(duration, scope);
      const std::int64_t expected = (duration + scope - 1) / scope;
      REQUIRE(static_cast<std::int64_t>(d.size()) == expected);
      std::int64_t cursor = 0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        const TimePeriod& p = d.periods[i];
        CHECK(p.start_s == cursor);
        if (i + 1 < d.size()) CHECK(p.duration_s() == scope);
        else CHECK(p.end_s == duration);
        CHECK(d.contains(p));
        CHECK(d.index_of(p) == i);
        cursor = p.end_s;
      }
      CHECK(cursor == duration);
      CHECK_FALSE(d.contains({0, duration + 1}));
      CHECK_FALSE(d.index_of({0, duration + 1}).has_value());
    }
  }
}

TEST_CASE("divide matches the brute-force reference on random inputs") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::int64_t> dur(1, 100000);
  std::uniform_int_distribution<std::int64_t> scope(1, 900);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t d = dur(rng);
    const std::int64_t s = scope(rng);
    CAPTURE(d);
    CAPTURE(s);
    REQUIRE(divide(d, s).periods == brute_divide(d, s));
  }
}

TEST_CASE("divide rejects non-positive arguments") {
  CHECK_THROWS_AS(divide(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(divide(100, 0), std::invalid_argument);
  CHECK_THROWS_AS(divide(-5, 10), std::invalid_argument);
}

TEST_CASE("divide_period keeps absolute coordinates") {
  const std::vector<TimePeriod> kids = divide_period({200, 400}, 50);
  REQUIRE(kids.size() == 4);
  CHECK(kids.front() == TimePeriod{200, 250});
  CHECK(kids.back() == TimePeriod{350, 400});

  const std::vector<TimePeriod> ragged = divide_period({395, 420}, 10);
  REQUIRE(ragged.size() == 3);
  CHECK(ragged[2] == TimePeriod{415, 420});

  CHECK_THROWS_AS(divide_period({20, 10}, 5), std::invalid_argument);
}

TEST_CASE("neighborhood_expand adds both neighbors and stays sorted") {
  const ClipDivision d = divide(1000, 200);  // five clips

  SUBCASE("middle selection") {
    const auto out = neighborhood_expand({d.periods[2]}, d);
    REQUIRE(out.size() == 3);
    CHECK(out[0] == d.periods[1]);
    CHECK(out[1] == d.periods[2]);
    CHECK(out[2] == d.periods[3]);
  }
  SUBCASE("edges clamp") {
    CHECK(neighborhood_expand({d.periods[0]}, d).size() == 2);
    CHECK(neighborhood_expand({d.periods[4]}, d).size() == 2);
  }
  SUBCASE("overlapping neighborhoods deduplicate") {
    const auto out = neighborhood_expand({d.periods[1], d.periods[2]}, d);
    REQUIRE(out.size() == 4);
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i - 1] < out[i]);
  }
  SUBCASE("result is a superset of the selection") {
    const auto out = neighborhood_expand({d.periods[0], d.periods[3]}, d);
    for (const TimePeriod& p : {d.periods[0], d.periods[3]})
      CHECK(std::find(out.begin(), out.end(), p) != out.end());
  }
  SUBCASE("non-member selection throws") {
    CHECK_THROWS_AS(neighborhood_expand({TimePeriod{1, 2}}, d), MembershipError);
  }
}

TEST_CASE("snap_to_candidates picks maximal overlap, earliest on ties") {
  const std::vector<TimePeriod> cands = divide(600, 200).periods;
  CHECK(snap_to_candidates(0, 200, cands) == TimePeriod{0, 200});
  CHECK(snap_to_candidates(150, 450, cands) == TimePeriod{200, 400});
  CHECK(snap_to_candidates(390, 410, cands) == TimePeriod{200, 400});  // tie -> earliest
  CHECK(snap_to_candidates(199, 201, cands) == TimePeriod{0, 200});    // tie -> earliest
  CHECK(snap_to_candidates(-50, 10, cands) == TimePeriod{0, 200});
  CHECK_THROWS_AS(snap_to_candidates(700, 900, cands), OutOfRangeError);
  CHECK_THROWS_AS(snap_to_candidates(700, 900, cands), ParseError);  // subclass contract
}

TEST_CASE("memory level names round-trip") {
  CHECK(std::string(to_string(MemoryLevel::Coarse)) == "coarse");
  CHECK(std::string(to_string(MemoryLevel::Fine)) == "fine");
  CHECK(std::string(to_string(MemoryLevel::UltraFine)) == "ultra-fine");
  for (MemoryLevel l : {MemoryLevel::Coarse, MemoryLevel::Fine, MemoryLevel::UltraFine})
    CHECK(level_from_string(to_string(l)) == l);
  CHECK_FALSE(level_from_string("medium").has_value());
  CHECK(MemoryLevel::Coarse < MemoryLevel::Fine);
  CHECK(MemoryLevel::Fine < MemoryLevel::UltraFine);
}

TEST_CASE("Fps renders exactly") {
  CHECK(Fps{2, 1}.str() == "2");
  CHECK(Fps{1, 4}.str() == "1/4");
  CHECK(Fps{1, 1}.to_double() == doctest::Approx(1.0));
  CHECK(Fps{1, 4}.to_double() == doctest::Approx(0.25));
}

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a64_hex("a").size() == 16);
}
