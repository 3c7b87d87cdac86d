#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "convsearch/fusion.hpp"
#include "convsearch/generation.hpp"

namespace convsearch {

enum class Selection { best_of_n, all };

// How best_of_n treats multiple strategies: one winner per strategy, or one
// overall winner across the pooled candidates of all strategies.
enum class SelectionScope { per_strategy, pooled };

enum class FusionOrder { rrf_first, rerank_first, none };

// Declarative description of one pipeline run.
struct RunConfig {
  std::string name;
  std::vector<std::string> strategies;
  std::size_t n_candidates = 10;
  Selection selection = Selection::best_of_n;
  SelectionScope selection_scope = SelectionScope::per_strategy;
  std::size_t retrieval_depth = 1000;
  FusionOrder fusion_order = FusionOrder::rrf_first;
  RrfConfig rrf{60.0, 2000};
  std::size_t rerank_top_n = 1000;
  GenerationParams generation{};
  ResponseMode response_mode = ResponseMode::offline;
  std::uint64_t seed = 1;
  double temperature = 1.0;
  double latency_budget_ms = 10000.0;
  bool thread_gold_history = false;    // thread gold responses instead of generated ones
  bool offline_query_in_prompt = false;  // include the rewritten query in offline prompts

  // Throws ValidationError on contradictions: unknown strategy names,
  // retrieval_depth < rerank_top_n, a multi-list setup with fusion_order
  // none, or selection=all fanned out without fusion.
  void validate() const;
};

const char* to_string(Selection v);
const char* to_string(SelectionScope v);
const char* to_string(FusionOrder v);
const char* to_string(ResponseMode v);

// The eight shipped run setups: interactive_run1 (pooled best-of-N, rerank
// only), interactive_run2 (one rewrite per strategy fused with RRF, then
// rerank), offline_run1..4 (per-strategy best-of-10, RRF, rerank; runs 2-4
// vary the candidate sampling seed, run 4 also widens sampling temperature)
// and gen_only_run1..2 (passthrough retrieval, offline generation parameter
// variants).
std::map<std::string, RunConfig> builtin_configs();

// JSON round-trip mirroring the struct field-for-field.
std::string run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

}  // namespace convsearch
