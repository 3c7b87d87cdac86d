#include <doctest.h>

#include "convsearch/mock_services.hpp"
#include "convsearch/prompts.hpp"

using namespace convsearch;

namespace {

std::string rewrite_prompt(const std::string& history, const std::string& question,
                           const std::string& profile = "") {
  return prompts::fill(prompts::rewrite_template("llm4cs"),
                       {{"ptkb", profile}, {"history", history},
                        {"utterance", question}});
}

}  // namespace

TEST_CASE("fnv1a64 is stable") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") != fnv1a64("b"));
  CHECK(fnv1a64("abc") == fnv1a64("abc"));
}

TEST_CASE("mock rewriting: candidate 0 is the question, later ones add context") {
  MockTextGenerator mock(1);
  const std::string prompt =
      rewrite_prompt("User: tell me about lentils\nAssistant: sure", "how to cook them?");
  const auto texts = mock.generate(prompt, 3, 1.0);
  REQUIRE(texts.size() == 3);
  CHECK(texts[0] == "how to cook them?");
  CHECK(texts[1].starts_with("how to cook them? "));
  CHECK(texts[2].size() > texts[1].size());
}

TEST_CASE("mock rewriting is deterministic per seed and varies across seeds") {
  const std::string prompt = rewrite_prompt(
      "User: african wildlife parks\nAssistant: lions leopards elephants rhinos buffalo",
      "which one is best?");
  MockTextGenerator a(7), b(7), c(8);
  CHECK(a.generate(prompt, 4, 1.0) == b.generate(prompt, 4, 1.0));
  CHECK(a.generate(prompt, 4, 1.0) != c.generate(prompt, 4, 1.0));
}

TEST_CASE("mock enhancement steps transform the history") {
  MockTextGenerator mock;
  const std::string prompt =
      prompts::fill(prompts::step_template(EnhanceStep::QD),
                    {{"history", "User: alpha\nAssistant: beta"},
                     {"utterance", "next?"}});
  const auto texts = mock.generate(prompt, 1, 1.0);
  REQUIRE(texts.size() == 1);
  CHECK(texts[0].starts_with("User: alpha"));
  CHECK(texts[0].find("(qd:") != std::string::npos);

  const std::string hs_prompt =
      prompts::fill(prompts::step_template(EnhanceStep::HS),
                    {{"history", "l1\nl2\nl3\nl4"}, {"utterance", "next?"}});
  CHECK(mock.generate(hs_prompt, 1, 1.0)[0] == "l1\n...\nl4");
}

TEST_CASE("mock ptkb_update finds new first-person facts") {
  MockTextGenerator mock;
  const std::string prompt =
      prompts::fill(prompts::ptkb_update_template(),
                    {{"ptkb", "p1: I am vegetarian"},
                     {"utterance", "I am allergic to nuts. What can I eat?"}});
  const auto texts = mock.generate(prompt, 1, 0.0);
  REQUIRE(texts.size() == 1);
  CHECK(texts[0] == "I am allergic to nuts");

  const std::string known =
      prompts::fill(prompts::ptkb_update_template(),
                    {{"ptkb", "p1: I am vegetarian"},
                     {"utterance", "I am vegetarian. Ideas?"}});
  CHECK(mock.generate(known, 1, 0.0)[0] == "none");
}

TEST_CASE("mock ptkb_select picks statements sharing a content token") {
  MockTextGenerator mock;
  const std::string prompt = prompts::fill(
      prompts::ptkb_select_template(),
      {{"ptkb", "p1: user is vegetarian\np2: user rides a bike"},
       {"utterance", "recommend vegetarian restaurants"}});
  CHECK(mock.generate(prompt, 1, 0.0)[0] == "p1");

  const std::string nothing = prompts::fill(
      prompts::ptkb_select_template(),
      {{"ptkb", "p1: user is vegetarian"}, {"utterance", "tallest mountain?"}});
  CHECK(mock.generate(nothing, 1, 0.0)[0] == "none");
}

TEST_CASE("noop scorer emits strictly descending positional scores") {
  NoopRerankScorer noop;
  const std::vector<Passage> passages = {{"a", ""}, {"b", ""}, {"c", ""}};
  const auto scores = noop.score_batch("q", passages);
  CHECK(scores == std::vector<double>{3.0, 2.0, 1.0});
}
