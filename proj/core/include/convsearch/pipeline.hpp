#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "convsearch/endpoints.hpp"
#include "convsearch/inverted_index.hpp"
#include "convsearch/run_config.hpp"
#include "convsearch/types.hpp"

namespace convsearch {

// Everything a turn needs. All pointers must outlive the call; the service
// objects must be thread-safe when run_batch runs with jobs > 1.
struct Services {
  const Corpus* corpus = nullptr;
  const InvertedIndex* index = nullptr;
  TextGenerator* generator = nullptr;
  RewardScorer* reward = nullptr;
  RerankScorer* reranker = nullptr;
};

struct TurnResult {
  std::string query_id;
  std::size_t history_len = 0;  // completed turns preceding this one
  std::vector<std::string> selected_queries;
  RankedList run_list;
  std::string response;
  std::vector<std::string> ptkb_provenance;   // selected statement ids
  std::vector<PtkbStatement> ptkb_added;      // statements added this turn
  std::vector<PtkbStatement> updated_ptkb;    // K_t, threaded to the next turn
  std::map<std::string, double> stage_latencies_ms;
  bool rerank_degraded = false;
  bool response_degraded = false;
  bool over_budget = false;
  std::vector<std::string> warnings;
};

// One full pipeline turn: candidate rewriting and selection per config,
// retrieval per selected query, fusion/rerank in the configured order, then
// the mode-specific generation stage. Endpoint trouble degrades and is
// flagged; only corpus/docid corruption throws.
TurnResult run_turn(const DialogueState& state, const RunConfig& config,
                    const Services& services);

// Runs every turn of every dialogue, threading each turn's generated
// response (and, offline, the updated PTKB) into the next turn's state.
// Writes one TREC run file tagged config.name, plus a JSONL transcript when
// transcript_path is non-empty. Dialogues may run in parallel (jobs > 1);
// output order stays dialogue-then-turn regardless.
std::vector<TurnResult> run_batch(std::span<const Dialogue> dialogues,
                                  const RunConfig& config, const Services& services,
                                  const std::string& run_path,
                                  const std::string& transcript_path = "",
                                  bool deterministic_transcript = false,
                                  std::size_t jobs = 1);

// One transcript line. Deterministic mode omits wall-clock fields
// (stage_latencies_ms, over_budget) so repeated mock runs are byte-identical.
std::string turn_result_json(const TurnResult& result, bool deterministic = false);

void write_transcript(std::span<const TurnResult> turns, const std::string& path,
                      bool deterministic = false);

}  // namespace convsearch
