#include <doctest.h>

#include "convsearch/errors.hpp"
#include "convsearch/generation.hpp"
#include "convsearch/mock_services.hpp"
#include "convsearch/prompts.hpp"

using namespace convsearch;

namespace {

DialogueState state_of(const std::string& utterance,
                       const std::vector<PtkbStatement>& ptkb = {}) {
  DialogueState state;
  state.dialogue_id = "d1";
  state.ptkb = ptkb;
  state.current = {"1", utterance, std::nullopt};
  return state;
}

class AnswerGenerator : public TextGenerator {
 public:
  explicit AnswerGenerator(std::string answer) : answer_(std::move(answer)) {}
  std::vector<std::string> generate(const std::string& prompt, std::size_t,
                                    double) override {
    prompts.push_back(prompt);
    return {answer_};
  }
  std::vector<std::string> prompts;

 private:
  std::string answer_;
};

class DeadGenerator : public TextGenerator {
 public:
  std::vector<std::string> generate(const std::string&, std::size_t,
                                    double) override {
    throw EndpointError("generation down");
  }
};

Corpus numbered_corpus(std::size_t n) {
  Corpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    corpus.add({"d" + std::to_string(i), "text " + std::to_string(i) + "."});
  }
  return corpus;
}

RankedList scored_list(const std::vector<double>& scores) {
  std::vector<std::pair<std::string, double>> entries;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    entries.emplace_back("d" + std::to_string(i), scores[i]);
  }
  return make_ranked_list("q", std::move(entries));
}

}  // namespace

TEST_CASE("update_ptkb keeps K unchanged when the mock answers none") {
  const auto state = state_of("plain question?", {{"p1", "fact", false}});
  AnswerGenerator none("none");
  const auto updated = update_ptkb(state, none);
  REQUIRE(updated.size() == 1);
  CHECK(updated[0].id == "p1");
}

TEST_CASE("update_ptkb appends new statements and never edits old ones") {
  const auto state = state_of("I am vegetarian. Ideas?", {{"p1", "fact", false}});
  AnswerGenerator one("user is vegetarian");
  const auto updated = update_ptkb(state, one);
  REQUIRE(updated.size() == 2);
  CHECK(updated[0].id == "p1");
  CHECK(updated[0].text == "fact");
  CHECK(updated[1].text == "user is vegetarian");
  CHECK(updated[1].id == "p2");
}

TEST_CASE("update_ptkb freezes K on endpoint failure, with a warning") {
  const auto state = state_of("u", {{"p1", "fact", false}});
  DeadGenerator dead;
  std::vector<std::string> warnings;
  const auto updated = update_ptkb(state, dead, &warnings);
  REQUIRE(updated.size() == 1);
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("update_ptkb is monotone over the mock") {
  MockTextGenerator mock;
  auto state = state_of("I ride at night. Lights?",
                        {{"p1", "I am vegetarian", false}});
  const auto updated = update_ptkb(state, mock);
  CHECK(updated.size() >= state.ptkb.size());
  for (std::size_t i = 0; i < state.ptkb.size(); ++i) {
    CHECK(updated[i].id == state.ptkb[i].id);
    CHECK(updated[i].text == state.ptkb[i].text);
  }
}

TEST_CASE("select_provenance with an empty PTKB is empty, no call made") {
  const auto state = state_of("u");
  AnswerGenerator generator("p1");
  CHECK(select_provenance(state, generator).empty());
  CHECK(generator.prompts.empty());
}

TEST_CASE("select_provenance returns a flagged subset of K") {
  const auto state = state_of("recommend vegetarian restaurants",
                              {{"p1", "user is vegetarian", false},
                               {"p2", "user rides a bike", false}});
  MockTextGenerator mock;
  const auto provenance = select_provenance(state, mock);
  REQUIRE(provenance.size() == 1);
  CHECK(provenance[0].id == "p1");
  CHECK(provenance[0].relevant);
}

TEST_CASE("select_provenance ignores ids outside K and degrades to empty") {
  const auto state = state_of("u", {{"p1", "fact", false}});
  AnswerGenerator rogue("p1, p9, zzz");
  const auto provenance = select_provenance(state, rogue);
  REQUIRE(provenance.size() == 1);
  CHECK(provenance[0].id == "p1");

  DeadGenerator dead;
  std::vector<std::string> warnings;
  CHECK(select_provenance(state, dead, &warnings).empty());
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("filter_and_chunk follows the shipped parameter arithmetic") {
  const Corpus corpus = numbered_corpus(30);

  // 25 entries, 18 above threshold 0.3 -> 3 direct + chunks [5,5,5].
  std::vector<double> scores;
  for (int i = 0; i < 25; ++i) {
    scores.push_back(i < 18 ? 1.0 - i * 0.01 : 0.1 - i * 0.001);
  }
  const auto chunked =
      filter_and_chunk(scored_list(scores), corpus, {20, 0.3, 3, 5});
  CHECK(chunked.direct.size() == 3);
  REQUIRE(chunked.chunks.size() == 3);
  for (const auto& chunk : chunked.chunks) {
    CHECK(chunk.size() == 5);
  }

  // 13 positive entries with params (13, 0, 4, 5) -> 4 direct + chunks [5,4].
  std::vector<double> thirteen;
  for (int i = 0; i < 13; ++i) {
    thirteen.push_back(2.0 - i * 0.1);
  }
  const auto second =
      filter_and_chunk(scored_list(thirteen), corpus, {13, 0.0, 4, 5});
  CHECK(second.direct.size() == 4);
  REQUIRE(second.chunks.size() == 2);
  CHECK(second.chunks[0].size() == 5);
  CHECK(second.chunks[1].size() == 4);
}

TEST_CASE("filter_and_chunk edge cases") {
  const Corpus corpus = numbered_corpus(5);
  RankedList empty;
  empty.query_id = "q";
  const auto nothing = filter_and_chunk(empty, corpus, {20, 0.3, 3, 5});
  CHECK(nothing.direct.empty());
  CHECK(nothing.chunks.empty());

  // Threshold comparison is strict.
  const auto at_threshold =
      filter_and_chunk(scored_list({0.3}), corpus, {20, 0.3, 3, 5});
  CHECK(at_threshold.direct.empty());

  RankedList ghost = make_ranked_list("q", {{"ghost", 1.0}});
  CHECK_THROWS_AS(filter_and_chunk(ghost, corpus, {20, 0.3, 3, 5}),
                  ValidationError);

  CHECK_THROWS_AS(filter_and_chunk(empty, corpus, {3, 0.0, 5, 5}),
                  ValidationError);  // direct > total
}

TEST_CASE("filter_and_chunk partition identity, exhaustive") {
  const Corpus corpus = numbered_corpus(45);
  const GenerationParams param_sets[] = {{20, 0.3, 3, 5}, {13, 0.0, 4, 5}};
  for (const auto& params : param_sets) {
    for (std::size_t len = 0; len <= 40; ++len) {
      // Above-threshold count varies with the list length.
      std::vector<double> scores;
      std::size_t above = 0;
      for (std::size_t i = 0; i < len; ++i) {
        const double score = 1.0 - static_cast<double>(i) * 0.04;
        scores.push_back(score);
        above += score > params.score_threshold ? 1 : 0;
      }
      const auto chunked = filter_and_chunk(scored_list(scores), corpus, params);
      const std::size_t expected = std::min<std::size_t>(params.num_passages, above);
      std::size_t total = chunked.direct.size();
      for (std::size_t c = 0; c < chunked.chunks.size(); ++c) {
        CHECK(chunked.chunks[c].size() >= 1);
        CHECK(chunked.chunks[c].size() <= params.summary_chunk_size);
        if (c + 1 < chunked.chunks.size()) {
          CHECK(chunked.chunks[c].size() == params.summary_chunk_size);
        }
        total += chunked.chunks[c].size();
      }
      CHECK(total == expected);
      CHECK(chunked.direct.size() ==
            std::min<std::size_t>(params.num_direct_passages, expected));
    }
  }
}

TEST_CASE("summarize_chunks of nothing is nothing") {
  AnswerGenerator generator("SUMMED");
  CHECK(summarize_chunks({}, generator).empty());
  CHECK(generator.prompts.empty());
}

TEST_CASE("summarize_chunks produces one summary per chunk") {
  std::vector<std::vector<Passage>> chunks = {
      {{"a", "First sentence. Second."}, {"b", "Only text"}},
      {{"c", "Another one here."}},
  };
  AnswerGenerator generator("SUMMED");
  const auto summaries = summarize_chunks(chunks, generator);
  CHECK(summaries == std::vector<std::string>{"SUMMED", "SUMMED"});
  CHECK(generator.prompts.size() == 2);

  DeadGenerator dead;
  std::vector<std::string> warnings;
  const auto fallback = summarize_chunks(chunks, dead, &warnings);
  REQUIRE(fallback.size() == 2);
  CHECK(fallback[0] == "First sentence. Only text");
  CHECK(fallback[1] == "Another one here.");
  CHECK(warnings.size() == 2);
}

TEST_CASE("generate_response: interactive needs a query, empty evidence templates") {
  const auto state = state_of("u", {{"p1", "likes tea", false}});
  AnswerGenerator generator("fine answer");

  GenerationInput no_query;
  no_query.direct_passages = {{"d", "text"}};
  CHECK_THROWS_AS(
      generate_response(state, no_query, ResponseMode::interactive, generator),
      ValidationError);

  GenerationInput empty;
  empty.provenance = {{"p1", "likes tea", true}};
  const auto templated =
      generate_response(state, empty, ResponseMode::offline, generator);
  CHECK_FALSE(templated.degraded);
  CHECK(templated.text.find("could not find") != std::string::npos);
  CHECK(templated.text.find("likes tea") != std::string::npos);
  CHECK(generator.prompts.empty());  // no endpoint call for the templated path
}

TEST_CASE("generate_response assembles the mode-specific prompt") {
  const auto state = state_of("the question", {{"p1", "likes tea", false}});
  AnswerGenerator generator("answer text");

  GenerationInput interactive;
  interactive.rewritten_query = "resolved query";
  interactive.direct_passages = {{"d1", "passage body"}};
  interactive.provenance = {{"p1", "likes tea", true}};
  const auto reply = generate_response(state, interactive,
                                       ResponseMode::interactive, generator);
  CHECK(reply.text == "answer text");
  REQUIRE(generator.prompts.size() == 1);
  const std::string& prompt = generator.prompts[0];
  CHECK(prompts::task_of(prompt) == "respond interactive");
  CHECK(prompts::extract_section(prompt, "[QUERY]") == "resolved query");
  CHECK(prompts::extract_section(prompt, "[PASSAGES]").find("d1") !=
        std::string::npos);

  GenerationInput offline;
  offline.direct_passages = {{"d1", "passage body"}};
  offline.summaries = {"short summary"};
  const auto off =
      generate_response(state, offline, ResponseMode::offline, generator);
  CHECK(off.text == "answer text");
  const std::string& off_prompt = generator.prompts[1];
  CHECK(prompts::task_of(off_prompt) == "respond offline");
  CHECK(off_prompt.find("[QUERY]") == std::string::npos);  // equation has no q'
  CHECK(prompts::extract_section(off_prompt, "[SUMMARIES]").find("short summary") !=
        std::string::npos);
}

TEST_CASE("generate_response degrades to an apology on endpoint failure") {
  const auto state = state_of("u");
  DeadGenerator dead;
  GenerationInput input;
  input.direct_passages = {{"d", "text"}};
  const auto result = generate_response(state, input, ResponseMode::offline, dead);
  CHECK(result.degraded);
  CHECK_FALSE(result.text.empty());
}
