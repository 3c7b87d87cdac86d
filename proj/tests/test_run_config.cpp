#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "convsearch/errors.hpp"
#include "convsearch/run_config.hpp"

using namespace convsearch;

TEST_CASE("the eight shipped run setups carry their stated parameters") {
  const auto configs = builtin_configs();
  REQUIRE(configs.size() == 8);
  for (const char* name :
       {"interactive_run1", "interactive_run2", "offline_run1", "offline_run2",
        "offline_run3", "offline_run4", "gen_only_run1", "gen_only_run2"}) {
    REQUIRE(configs.contains(name));
    configs.at(name).validate();
  }

  const RunConfig& i1 = configs.at("interactive_run1");
  CHECK(i1.strategies == std::vector<std::string>{"chiq_ad_no_hs", "llm4cs"});
  CHECK(i1.selection == Selection::best_of_n);
  CHECK(i1.selection_scope == SelectionScope::pooled);
  CHECK(i1.retrieval_depth == 2000);
  CHECK(i1.fusion_order == FusionOrder::none);
  CHECK(i1.response_mode == ResponseMode::interactive);

  const RunConfig& i2 = configs.at("interactive_run2");
  CHECK(i2.strategies == std::vector<std::string>{"chiq_ad_no_hs", "llm4cs"});
  CHECK(i2.retrieval_depth == 2000);
  CHECK(i2.fusion_order == FusionOrder::rrf_first);
  CHECK(i2.response_mode == ResponseMode::interactive);

  for (const char* name : {"offline_run1", "offline_run2", "offline_run3",
                           "offline_run4"}) {
    const RunConfig& config = configs.at(name);
    CHECK(config.n_candidates == 10);
    CHECK(config.retrieval_depth == 1000);
    CHECK(config.fusion_order == FusionOrder::rrf_first);
    CHECK(config.selection == Selection::best_of_n);
    CHECK(config.selection_scope == SelectionScope::per_strategy);
    CHECK(config.generation.num_passages == 20);
    CHECK(config.generation.score_threshold == doctest::Approx(0.3));
    CHECK(config.generation.num_direct_passages == 3);
    CHECK(config.generation.summary_chunk_size == 5);
    CHECK(config.response_mode == ResponseMode::offline);
  }
  CHECK(configs.at("offline_run1").strategies ==
        std::vector<std::string>{"chiq_ad_no_hs", "llm4cs"});
  CHECK(configs.at("offline_run2").strategies ==
        std::vector<std::string>{"chiq_ad_no_hs", "llm4cs_no_pr"});
  // Runs 2..4 differ by candidate sampling only.
  CHECK(configs.at("offline_run2").seed != configs.at("offline_run3").seed);
  CHECK(configs.at("offline_run4").seed != configs.at("offline_run3").seed);

  const RunConfig& g2 = configs.at("gen_only_run2");
  CHECK(g2.generation.num_passages == 13);
  CHECK(g2.generation.score_threshold == doctest::Approx(0.0));
  CHECK(g2.generation.num_direct_passages == 4);
  CHECK(g2.generation.summary_chunk_size == 5);
  CHECK(configs.at("gen_only_run1").generation.num_passages == 20);
}

TEST_CASE("run configs round-trip through JSON") {
  for (const auto& [name, config] : builtin_configs()) {
    const RunConfig parsed = run_config_from_json(run_config_to_json(config));
    CHECK(parsed.name == config.name);
    CHECK(parsed.strategies == config.strategies);
    CHECK(parsed.n_candidates == config.n_candidates);
    CHECK(parsed.selection == config.selection);
    CHECK(parsed.selection_scope == config.selection_scope);
    CHECK(parsed.retrieval_depth == config.retrieval_depth);
    CHECK(parsed.fusion_order == config.fusion_order);
    CHECK(parsed.rrf.k == config.rrf.k);
    CHECK(parsed.rrf.depth == config.rrf.depth);
    CHECK(parsed.rerank_top_n == config.rerank_top_n);
    CHECK(parsed.generation.num_passages == config.generation.num_passages);
    CHECK(parsed.generation.score_threshold == config.generation.score_threshold);
    CHECK(parsed.response_mode == config.response_mode);
    CHECK(parsed.seed == config.seed);
    CHECK(parsed.temperature == config.temperature);
  }
}

TEST_CASE("the shipped config files stay in sync with the builtins") {
  const char* data = std::getenv("CONVSEARCH_DATA");
  REQUIRE_MESSAGE(data != nullptr, "CONVSEARCH_DATA must point at data/");
  for (const auto& [name, config] : builtin_configs()) {
    const auto path =
        (std::filesystem::path(data) / "configs" / (name + ".json")).string();
    const RunConfig from_file = load_run_config(path);
    CHECK(run_config_to_json(from_file) == run_config_to_json(config));
  }
}

TEST_CASE("contradictory configs are rejected") {
  RunConfig config = builtin_configs().at("offline_run1");

  config.rerank_top_n = config.retrieval_depth + 1;
  CHECK_THROWS_AS(config.validate(), ValidationError);

  config = builtin_configs().at("offline_run1");
  config.strategies = {"no_such_strategy"};
  CHECK_THROWS_AS(config.validate(), ValidationError);

  // selection=all with several strategies needs fusion.
  config = builtin_configs().at("interactive_run2");
  config.fusion_order = FusionOrder::none;
  CHECK_THROWS_AS(config.validate(), ValidationError);

  config = builtin_configs().at("offline_run1");
  config.strategies.clear();
  CHECK_THROWS_AS(config.validate(), ValidationError);

  CHECK_THROWS_AS(run_config_from_json("{not json"), ParseError);
  CHECK_THROWS_AS(load_run_config("/no/such/config.json"), IoError);
}
