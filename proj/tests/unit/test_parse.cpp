#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "lucy/backend.hpp"
#include "lucy/errors.hpp"
#include "lucy/parse.hpp"
#include "lucy/responses.hpp"
#include "lucy/time_model.hpp"

using namespace lucy;

namespace {

const std::vector<TimePeriod> kCands = divide(1000, 200).periods;

// Replays a fixed list of replies, then keeps repeating the last one.
class SeqBackend : public TextBackend {
 public:
  explicit SeqBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::vector<std::string> prompts;

 protected:
  std::string do_complete(const std::string& prompt, const DecodeParams&) override {
    prompts.push_back(prompt);
    const std::size_t i = std::min(prompts.size() - 1, replies_.size() - 1);
    return replies_[i];
  }

 private:
  std::vector<std::string> replies_;
};

}  // namespace

TEST_CASE("extract_first_dict finds the dictionary inside prose and fences") {
  auto d = extract_first_dict("Sure! Here you go:\n```python\n{\"Flag\": True}\n```\nDone.");
  REQUIRE(d.has_value());
  const DictValue* flag = map_get(*d, "Flag");
  REQUIRE(flag != nullptr);
  CHECK(flag->is_bool());
  CHECK(std::get<bool>(flag->v));

  CHECK(extract_first_dict("no dictionary here").has_value() == false);
  CHECK(extract_first_dict("{\"unterminated\": ").has_value() == false);
}

TEST_CASE("extract_first_dict handles nesting, escapes, and literals") {
  const std::string raw =
      "{\"s\": \"brace } inside \\\" quote\", \"n\": None, \"xs\": [1, (2, 3)], "
      "\"m\": {\"inner\": False}, \"f\": 2.5}";
  auto d = extract_first_dict(raw);
  REQUIRE(d.has_value());
  CHECK(std::get<std::string>(map_get(*d, "s")->v) == "brace } inside \" quote");
  CHECK(map_get(*d, "n")->v.index() == 0);  // null alternative
  REQUIRE(map_get(*d, "xs")->is_seq());
  const ValueSeq& xs = std::get<ValueSeq>(map_get(*d, "xs")->v);
  REQUIRE(xs.size() == 2);
  CHECK(std::get<double>(xs[0].v) == 1.0);
  REQUIRE(xs[1].is_seq());  // tuples and lists are both sequences
  CHECK(map_get(*d, "m")->is_map());
  CHECK(std::get<double>(map_get(*d, "f")->v) == 2.5);
  CHECK(map_get(*d, "missing") == nullptr);
}

TEST_CASE("extract_first_dict takes the first well-formed dictionary") {
  auto d = extract_first_dict("{\"a\": 1} and later {\"b\": 2}");
  REQUIRE(d.has_value());
  CHECK(map_get(*d, "a") != nullptr);
  CHECK(map_get(*d, "b") == nullptr);
}

TEST_CASE("parse_init_localization snaps periods to candidates") {
  const std::string raw =
      "{\"Flag\": True, \"Time Period\": [(0, 200), (350, 450), (799, 801)], "
      "\"Reason\": \"spread\"}";
  const InitLocalizationResponse r = parse_init_localization(raw, kCands);
  CHECK(r.flag);
  REQUIRE(r.periods.size() == 3);
  CHECK(r.periods[0] == TimePeriod{0, 200});
  CHECK(r.periods[1] == TimePeriod{200, 400});  // 50s overlap beats 400-600's 50s tie -> earliest
  CHECK(r.periods[2] == TimePeriod{600, 800});
  CHECK(r.reason == "spread");
}

TEST_CASE("parse_init_localization refusal forms") {
  for (const char* raw :
       {"{\"Flag\": False, \"Time Period\": \"No Time Periods.\", \"Reason\": \"broad\"}",
        "{\"Flag\": True, \"Time Period\": \"No Time Periods.\", \"Reason\": \"\"}",
        "{\"Flag\": False, \"Time Period\": [], \"Reason\": \"\"}"}) {
    CAPTURE(raw);
    const InitLocalizationResponse r = parse_init_localization(raw, kCands);
    CHECK_FALSE(r.flag);
    CHECK(r.periods.empty());
  }
}

TEST_CASE("parse_init_localization failures") {
  CHECK_THROWS_AS(parse_init_localization("nothing", kCands), ParseError);
  CHECK_THROWS_AS(
      parse_init_localization("{\"Time Period\": [(0, 200)], \"Reason\": \"\"}", kCands),
      ParseError);
  CHECK_THROWS_AS(
      parse_init_localization("{\"Flag\": True, \"Time Period\": [], \"Reason\": \"\"}", kCands),
      ParseError);
  // a period beyond the covered range clamps to nothing and fails
  CHECK_THROWS_AS(parse_init_localization(
                      "{\"Flag\": True, \"Time Period\": [(5000, 6000)], \"Reason\": \"\"}",
                      kCands),
                  ParseError);
}

TEST_CASE("parse_locate_and_instruct wants exactly one period and an instruction") {
  const std::string raw =
      "{\"Time Period\": [(390, 410)], \"Instruction\": \"Focus on the door.\", "
      "\"Reason\": \"closest\"}";
  const LocateInstructResponse r = parse_locate_and_instruct(raw, kCands);
  CHECK(r.period == TimePeriod{200, 400});
  CHECK(r.instruction == "Focus on the door.");

  CHECK_THROWS_AS(parse_locate_and_instruct(
                      "{\"Time Period\": [(0, 10), (20, 30)], \"Instruction\": \"x\"}", kCands),
                  ParseError);
  CHECK_THROWS_AS(parse_locate_and_instruct(
                      "{\"Time Period\": [(0, 10)], \"Instruction\": \"\"}", kCands),
                  ParseError);
  CHECK_THROWS_AS(parse_locate_and_instruct("{\"Time Period\": [(0, 10)]}", kCands), ParseError);
}

TEST_CASE("parse_answer accepts confident and unconfident forms") {
  const AnswerResponse yes = parse_answer(
      "{\"Confidence\": True, \"Answer\": \"B. the gate\", "
      "\"Time Period\": [(10, 20), (30, 40)], \"Reason\": \"seen twice\"}");
  CHECK(yes.confidence);
  CHECK(yes.answer == "B. the gate");
  REQUIRE(yes.periods.size() == 2);
  CHECK(yes.periods[1] == TimePeriod{30, 40});

  const AnswerResponse no = parse_answer(
      "{\"Confidence\": False, \"Answer\": \"No Answer\", \"Time Period\": \"No Time\", "
      "\"Reason\": \"too coarse\"}");
  CHECK_FALSE(no.confidence);
  CHECK(no.answer == "No Answer");
  CHECK(no.periods.empty());
  CHECK(no.reason == "too coarse");
}

TEST_CASE("parse_answer demotes stray text on unconfident output") {
  const AnswerResponse r = parse_answer(
      "{\"Confidence\": False, \"Answer\": \"maybe the door\", \"Time Period\": \"No Time\", "
      "\"Reason\": \"\"}");
  CHECK_FALSE(r.confidence);
  CHECK(r.answer == "No Answer");
  CHECK(r.reason.find("maybe the door") != std::string::npos);
}

TEST_CASE("parse_answer rejects contradictions") {
  // confident but no answer text
  CHECK_THROWS_AS(parse_answer("{\"Confidence\": True, \"Answer\": \"No Answer\", "
                               "\"Time Period\": [(0, 10)], \"Reason\": \"\"}"),
                  ParseError);
  // confident but no evidence
  CHECK_THROWS_AS(parse_answer("{\"Confidence\": True, \"Answer\": \"B\", "
                               "\"Time Period\": \"No Time\", \"Reason\": \"\"}"),
                  ParseError);
  // inverted evidence interval
  CHECK_THROWS_AS(parse_answer("{\"Confidence\": True, \"Answer\": \"B\", "
                               "\"Time Period\": [(20, 10)], \"Reason\": \"\"}"),
                  ParseError);
  CHECK_THROWS_AS(parse_answer("{\"Answer\": \"B\"}"), ParseError);
}

TEST_CASE("dictionary renderings round-trip through the parsers") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::size_t> pick(0, kCands.size() - 1);
  std::uniform_int_distribution<int> count(1, 3);
  const std::vector<std::string> texts = {
      "plain", "with \"quotes\"", "line\nbreak", "tab\tand\\slash", "brace } bracket ]",
      "unicode \xE2\x80\x93 dash"};
  auto text = [&]() { return texts[pick(rng) % texts.size()]; };

  for (int i = 0; i < 10000; ++i) {
    CAPTURE(i);
    switch (i % 3) {
      case 0: {
        InitLocalizationResponse r;
        r.flag = coin(rng) == 1;
        r.reason = text();
        if (r.flag) {
          std::size_t at = pick(rng) % 3;
          for (int k = 0; k < count(rng) && at < kCands.size(); ++k, at += 2)
            r.periods.push_back(kCands[at]);
        }
        REQUIRE(parse_init_localization(to_dict_text(r), kCands) == r);
        break;
      }
      case 1: {
        LocateInstructResponse r;
        r.period = kCands[pick(rng)];
        r.instruction = "Observe " + text();
        r.reason = text();
        REQUIRE(parse_locate_and_instruct(to_dict_text(r), kCands) == r);
        break;
      }
      case 2: {
        AnswerResponse r;
        r.confidence = coin(rng) == 1;
        r.reason = text();
        if (r.confidence) {
          r.answer = "A. " + text();
          const int n = count(rng);
          for (int k = 0; k < n; ++k) {
            const std::int64_t s = static_cast<std::int64_t>(pick(rng)) * 13;
            r.periods.push_back({s, s + 1 + static_cast<std::int64_t>(pick(rng))});
          }
        }
        REQUIRE(parse_answer(to_dict_text(r)) == r);
        break;
      }
    }
  }
}

TEST_CASE("retry_parse re-prompts with the schema hint and stops at the budget") {
  const std::string good =
      "{\"Confidence\": False, \"Answer\": \"No Answer\", \"Time Period\": \"No Time\", "
      "\"Reason\": \"ok\"}";

  SUBCASE("two failures then success under max_repairs=2") {
    SeqBackend backend({"garbage", "{\"Confidence\": maybe", good});
    std::vector<ParseAttempt> attempts;
    const AnswerResponse r = retry_parse<AnswerResponse>(
        [] { return std::string("base prompt"); },
        [](const std::string& raw) { return parse_answer(raw); }, backend, {}, 2,
        kAnswerSchemaHint, [&](const ParseAttempt& a) { attempts.push_back(a); });
    CHECK(r.reason == "ok");
    CHECK(backend.calls() == 3);
    REQUIRE(attempts.size() == 3);
    CHECK_FALSE(attempts[0].ok);
    CHECK_FALSE(attempts[1].ok);
    CHECK(attempts[2].ok);
    CHECK(attempts[0].prompt == "base prompt");
    // the repair prompt quotes the failed output and the schema reminder
    CHECK(attempts[1].prompt.find("base prompt") == 0);
    CHECK(attempts[1].prompt.find("garbage") != std::string::npos);
    CHECK(attempts[1].prompt.find(kAnswerSchemaHint) != std::string::npos);
    CHECK(attempts[1].prompt.find("could not be parsed") != std::string::npos);
  }

  SUBCASE("exhausted budget rethrows the last parse error") {
    SeqBackend backend({"junk"});
    CHECK_THROWS_AS(retry_parse<AnswerResponse>(
                        [] { return std::string("p"); },
                        [](const std::string& raw) { return parse_answer(raw); }, backend, {}, 1,
                        kAnswerSchemaHint),
                    ParseError);
    CHECK(backend.calls() == 2);  // 1 + max_repairs
  }

  SUBCASE("immediate success makes exactly one call") {
    SeqBackend backend({good});
    retry_parse<AnswerResponse>([] { return std::string("p"); },
                                [](const std::string& raw) { return parse_answer(raw); },
                                backend, {}, 2, kAnswerSchemaHint);
    CHECK(backend.calls() == 1);
  }
}

TEST_CASE("render_repair_suffix caps the quoted reply") {
  const std::string huge(5000, 'x');
  const std::string suffix = render_repair_suffix(huge, "boom", "HINT");
  CHECK(suffix.size() < 3000);
  CHECK(suffix.find("boom") != std::string::npos);
  CHECK(suffix.find("HINT") != std::string::npos);
  CHECK(suffix.find("[...]") != std::string::npos);
}
