#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>
#include <string>

#include "lucy/errors.hpp"
#include "lucy/memory_list.hpp"
#include "lucy/prompts.hpp"

using namespace lucy;

namespace {

MemoryEntry entry(std::int64_t a, std::int64_t b, MemoryLevel lvl, const char* text) {
  MemoryEntry e;
  e.video_id = "golden";
  e.period = {a, b};
  e.level = lvl;
  e.text = text;
  return e;
}

// Fixture mirrored by the checked-in golden files. Do not change one
// without the other.
MemoryList coarse_fixture() {
  MemoryList m;
  m.upsert(entry(0, 200, MemoryLevel::Coarse, "A man enters the lobby and waits."));
  m.upsert(entry(200, 400, MemoryLevel::Coarse, "The lobby stays empty."));
  m.upsert(entry(400, 600, MemoryLevel::Coarse, "A deliveryman drops a package."));
  return m;
}

MemoryList mixed_fixture() {
  MemoryList m = coarse_fixture();
  m.upsert(entry(200, 210, MemoryLevel::Fine, "A guard checks the side door."));
  return m;
}

const std::string kQuestion =
    "What does the guard check?\nA. the side door\nB. the front gate";

std::string golden(const char* name) {
  std::ifstream in(std::string(LUCY_TEST_DATA_DIR) + "/golden/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("initial localization prompt matches the golden byte for byte") {
  CHECK(render_init_localization_prompt(coarse_fixture(), kQuestion, 3) ==
        golden("init_loc.txt"));
}

TEST_CASE("locate-and-instruct prompt matches the golden byte for byte") {
  CHECK(render_locate_and_instruct_prompt(mixed_fixture(), kQuestion, {TimePeriod{0, 200}},
                                          600) == golden("loc_ins.txt"));
}

TEST_CASE("answer prompts match the goldens byte for byte") {
  CHECK(render_answer_prompt(mixed_fixture(), kQuestion, 600, false) == golden("answer.txt"));
  CHECK(render_answer_prompt(mixed_fixture(), kQuestion, 600, true) ==
        golden("answer_forced.txt"));
}

TEST_CASE("relevance prompt matches the golden byte for byte") {
  CHECK(render_relevance_prompt("A guard checks the side door.", kQuestion) ==
        golden("relevance.txt"));
}

TEST_CASE("forced prompt is the plain prompt plus the forcing addendum") {
  const std::string plain = render_answer_prompt(mixed_fixture(), kQuestion, 600, false);
  const std::string forced = render_answer_prompt(mixed_fixture(), kQuestion, 600, true);
  CHECK(forced.substr(0, plain.size()) == plain);
  CHECK(forced.find(kForcedAnswerAddendum) != std::string::npos);
  CHECK(plain.find("final opportunity") == std::string::npos);
}

TEST_CASE("requested period count is spelled out in words") {
  const std::string three = render_init_localization_prompt(coarse_fixture(), kQuestion, 3);
  CHECK(three.find("of three time periods") != std::string::npos);
  CHECK(three.find("most relevant three time periods") != std::string::npos);

  const std::string five = render_init_localization_prompt(coarse_fixture(), kQuestion, 5);
  CHECK(five.find("of five time periods") != std::string::npos);
  CHECK(five.find("three time periods") == std::string::npos);
}

TEST_CASE("excluded periods render in ascending tuple form") {
  CHECK(render_excluded_periods({}) == "(none)");
  CHECK(render_excluded_periods({TimePeriod{400, 600}, TimePeriod{0, 200}}) ==
        "(0, 200), (400, 600)");

  const std::string p = render_locate_and_instruct_prompt(
      mixed_fixture(), kQuestion, {TimePeriod{0, 200}, TimePeriod{400, 600}}, 600);
  CHECK(p.find("other than the following time periods:\n\n(0, 200), (400, 600)") !=
        std::string::npos);
}

TEST_CASE("prompts embed the duration and the memory rendering") {
  const std::string p = render_answer_prompt(mixed_fixture(), kQuestion, 12345, false);
  CHECK(p.find("12345 seconds") != std::string::npos);
  CHECK(p.find(render_for_prompt(mixed_fixture())) != std::string::npos);
  CHECK(p.find(kQuestion) != std::string::npos);
}

TEST_CASE("empty question or memory is a template error") {
  CHECK_THROWS_AS(render_init_localization_prompt(MemoryList{}, kQuestion), TemplateError);
  CHECK_THROWS_AS(render_init_localization_prompt(coarse_fixture(), ""), TemplateError);
  CHECK_THROWS_AS(render_answer_prompt(MemoryList{}, kQuestion, 600, false), TemplateError);
  CHECK_THROWS_AS(
      render_locate_and_instruct_prompt(coarse_fixture(), "", {}, 600), TemplateError);
  CHECK_THROWS_AS(render_relevance_prompt("", kQuestion), TemplateError);
}

TEST_CASE("coarse caption instruction asks for a comprehensive description") {
  const std::string s = kCoarseCaptionInstruction;
  CHECK(s.find("Describe all the details") != std::string::npos);
  CHECK(s.find("as comprehensively as possible") != std::string::npos);
}
