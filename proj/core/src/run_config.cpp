#include "convsearch/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "convsearch/errors.hpp"
#include "convsearch/rewrite.hpp"

namespace convsearch {

using nlohmann::json;

const char* to_string(Selection v) {
  return v == Selection::best_of_n ? "best_of_n" : "all";
}

const char* to_string(SelectionScope v) {
  return v == SelectionScope::per_strategy ? "per_strategy" : "pooled";
}

const char* to_string(FusionOrder v) {
  switch (v) {
    case FusionOrder::rrf_first: return "rrf_first";
    case FusionOrder::rerank_first: return "rerank_first";
    case FusionOrder::none: return "none";
  }
  return "none";
}

const char* to_string(ResponseMode v) {
  return v == ResponseMode::interactive ? "interactive" : "offline";
}

namespace {

Selection selection_from(const std::string& s) {
  if (s == "best_of_n") return Selection::best_of_n;
  if (s == "all") return Selection::all;
  throw ValidationError("unknown selection \"" + s + "\"");
}

SelectionScope scope_from(const std::string& s) {
  if (s == "per_strategy") return SelectionScope::per_strategy;
  if (s == "pooled") return SelectionScope::pooled;
  throw ValidationError("unknown selection_scope \"" + s + "\"");
}

FusionOrder fusion_from(const std::string& s) {
  if (s == "rrf_first") return FusionOrder::rrf_first;
  if (s == "rerank_first") return FusionOrder::rerank_first;
  if (s == "none") return FusionOrder::none;
  throw ValidationError("unknown fusion_order \"" + s + "\"");
}

ResponseMode mode_from(const std::string& s) {
  if (s == "interactive") return ResponseMode::interactive;
  if (s == "offline") return ResponseMode::offline;
  throw ValidationError("unknown response_mode \"" + s + "\"");
}

}  // namespace

void RunConfig::validate() const {
  if (name.empty()) {
    throw ValidationError("run config needs a name");
  }
  if (strategies.empty()) {
    throw ValidationError("run config \"" + name + "\" has no strategies");
  }
  for (const std::string& strategy : strategies) {
    strategy_by_name(strategy);  // throws on unknown names
  }
  if (n_candidates < 1) {
    throw ValidationError("run config \"" + name + "\": n_candidates must be >= 1");
  }
  if (retrieval_depth < 1 || rerank_top_n < 1) {
    throw ValidationError("run config \"" + name + "\": depths must be >= 1");
  }
  if (retrieval_depth < rerank_top_n) {
    throw ValidationError("run config \"" + name +
                          "\": retrieval_depth must be >= rerank_top_n");
  }
  rrf.validate();
  generation.validate();
  if (fusion_order == FusionOrder::none) {
    // A single ranked list must come out of the retrieval stage.
    const bool single_query =
        (selection == Selection::best_of_n &&
         (selection_scope == SelectionScope::pooled || strategies.size() == 1)) ||
        (selection == Selection::all && strategies.size() == 1 && n_candidates == 1);
    if (!single_query) {
      throw ValidationError("run config \"" + name +
                            "\": fusion_order none needs exactly one query per turn");
    }
  }
  if (latency_budget_ms <= 0) {
    throw ValidationError("run config \"" + name +
                          "\": latency_budget_ms must be > 0");
  }
  if (temperature < 0) {
    throw ValidationError("run config \"" + name + "\": temperature must be >= 0");
  }
}

std::map<std::string, RunConfig> builtin_configs() {
  std::map<std::string, RunConfig> configs;

  // Interactive run 1: pooled best-of-N over both strategies, single query,
  // rerank only. N kept small for the latency budget.
  RunConfig interactive1;
  interactive1.name = "interactive_run1";
  interactive1.strategies = {"chiq_ad_no_hs", "llm4cs"};
  interactive1.n_candidates = 3;
  interactive1.selection = Selection::best_of_n;
  interactive1.selection_scope = SelectionScope::pooled;
  interactive1.retrieval_depth = 2000;
  interactive1.fusion_order = FusionOrder::none;
  interactive1.rrf = {60.0, 2000};
  interactive1.rerank_top_n = 1000;
  interactive1.response_mode = ResponseMode::interactive;
  configs[interactive1.name] = interactive1;

  // Interactive run 2: one rewrite per strategy, each branch retrieves,
  // RRF before reranking.
  RunConfig interactive2 = interactive1;
  interactive2.name = "interactive_run2";
  interactive2.n_candidates = 1;
  interactive2.selection = Selection::all;
  interactive2.selection_scope = SelectionScope::per_strategy;
  interactive2.fusion_order = FusionOrder::rrf_first;
  interactive2.rrf = {60.0, 4000};
  configs[interactive2.name] = interactive2;

  // Offline runs: per-strategy best-of-10, RRF over the two selected
  // queries, then rerank. Runs differ in candidate sets only.
  RunConfig offline;
  offline.name = "offline_run1";
  offline.strategies = {"chiq_ad_no_hs", "llm4cs"};
  offline.n_candidates = 10;
  offline.selection = Selection::best_of_n;
  offline.selection_scope = SelectionScope::per_strategy;
  offline.retrieval_depth = 1000;
  offline.fusion_order = FusionOrder::rrf_first;
  offline.rrf = {60.0, 2000};
  offline.rerank_top_n = 1000;
  offline.generation = {20, 0.3, 3, 5};
  offline.response_mode = ResponseMode::offline;
  offline.seed = 1;
  configs[offline.name] = offline;

  RunConfig offline2 = offline;
  offline2.name = "offline_run2";
  offline2.strategies = {"chiq_ad_no_hs", "llm4cs_no_pr"};
  offline2.seed = 2;
  configs[offline2.name] = offline2;

  RunConfig offline3 = offline2;
  offline3.name = "offline_run3";
  offline3.seed = 3;
  configs[offline3.name] = offline3;

  RunConfig offline4 = offline2;
  offline4.name = "offline_run4";
  offline4.seed = 4;
  offline4.temperature = 1.5;  // widen candidate variation
  configs[offline4.name] = offline4;

  // Generation-only runs: passthrough retrieval feeding the offline
  // response stage; the two differ in filtering parameters only.
  RunConfig gen1;
  gen1.name = "gen_only_run1";
  gen1.strategies = {"passthrough"};
  gen1.n_candidates = 1;
  gen1.selection = Selection::best_of_n;
  gen1.selection_scope = SelectionScope::per_strategy;
  gen1.retrieval_depth = 1000;
  gen1.fusion_order = FusionOrder::none;
  gen1.rrf = {60.0, 1000};
  gen1.rerank_top_n = 1000;
  gen1.generation = {20, 0.3, 3, 5};
  gen1.response_mode = ResponseMode::offline;
  configs[gen1.name] = gen1;

  RunConfig gen2 = gen1;
  gen2.name = "gen_only_run2";
  gen2.generation = {13, 0.0, 4, 5};
  configs[gen2.name] = gen2;

  for (auto& [name, config] : configs) {
    config.validate();
  }
  return configs;
}

std::string run_config_to_json(const RunConfig& config) {
  json j;
  j["name"] = config.name;
  j["strategies"] = config.strategies;
  j["n_candidates"] = config.n_candidates;
  j["selection"] = to_string(config.selection);
  j["selection_scope"] = to_string(config.selection_scope);
  j["retrieval_depth"] = config.retrieval_depth;
  j["fusion_order"] = to_string(config.fusion_order);
  j["rrf"] = {{"k", config.rrf.k}, {"depth", config.rrf.depth}};
  j["rerank_top_n"] = config.rerank_top_n;
  j["generation"] = {{"num_passages", config.generation.num_passages},
                     {"score_threshold", config.generation.score_threshold},
                     {"num_direct_passages", config.generation.num_direct_passages},
                     {"summary_chunk_size", config.generation.summary_chunk_size}};
  j["response_mode"] = to_string(config.response_mode);
  j["seed"] = config.seed;
  j["temperature"] = config.temperature;
  j["latency_budget_ms"] = config.latency_budget_ms;
  j["thread_gold_history"] = config.thread_gold_history;
  j["offline_query_in_prompt"] = config.offline_query_in_prompt;
  return j.dump(2) + "\n";
}

RunConfig run_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("run config: ") + e.what());
  }
  RunConfig config;
  try {
    config.name = j.at("name").get<std::string>();
    config.strategies = j.at("strategies").get<std::vector<std::string>>();
    config.n_candidates = j.value("n_candidates", config.n_candidates);
    config.selection = selection_from(j.value("selection", "best_of_n"));
    config.selection_scope = scope_from(j.value("selection_scope", "per_strategy"));
    config.retrieval_depth = j.value("retrieval_depth", config.retrieval_depth);
    config.fusion_order = fusion_from(j.value("fusion_order", "rrf_first"));
    if (j.contains("rrf")) {
      config.rrf.k = j["rrf"].value("k", config.rrf.k);
      config.rrf.depth = j["rrf"].value("depth", config.rrf.depth);
    }
    config.rerank_top_n = j.value("rerank_top_n", config.rerank_top_n);
    if (j.contains("generation")) {
      const json& g = j["generation"];
      config.generation.num_passages =
          g.value("num_passages", config.generation.num_passages);
      config.generation.score_threshold =
          g.value("score_threshold", config.generation.score_threshold);
      config.generation.num_direct_passages =
          g.value("num_direct_passages", config.generation.num_direct_passages);
      config.generation.summary_chunk_size =
          g.value("summary_chunk_size", config.generation.summary_chunk_size);
    }
    config.response_mode = mode_from(j.value("response_mode", "offline"));
    config.seed = j.value("seed", config.seed);
    config.temperature = j.value("temperature", config.temperature);
    config.latency_budget_ms = j.value("latency_budget_ms", config.latency_budget_ms);
    config.thread_gold_history =
        j.value("thread_gold_history", config.thread_gold_history);
    config.offline_query_in_prompt =
        j.value("offline_query_in_prompt", config.offline_query_in_prompt);
  } catch (const json::exception& e) {
    throw ParseError(std::string("run config: ") + e.what());
  }
  config.validate();
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open \"" + path + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return run_config_from_json(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace convsearch
