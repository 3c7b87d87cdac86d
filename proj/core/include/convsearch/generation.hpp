#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "convsearch/endpoints.hpp"
#include "convsearch/types.hpp"

namespace convsearch {

struct GenerationParams {
  std::size_t num_passages = 20;
  double score_threshold = 0.3;
  std::size_t num_direct_passages = 3;
  std::size_t summary_chunk_size = 5;

  void validate() const;  // num_direct_passages <= num_passages, chunk size >= 1
};

struct GenerationInput {
  std::vector<Passage> direct_passages;
  std::vector<std::string> summaries;
  std::vector<PtkbStatement> provenance;
  std::optional<std::string> rewritten_query;
};

enum class ResponseMode { interactive, offline };

// Asks the endpoint whether the current utterance reveals personal facts not
// yet in the PTKB and appends them. Existing statements are never removed or
// edited; on endpoint failure the PTKB is returned unchanged with a warning.
std::vector<PtkbStatement> update_ptkb(const DialogueState& state,
                                       TextGenerator& generator,
                                       std::vector<std::string>* warnings = nullptr);

// Selects the PTKB statements relevant to the current utterance. Always a
// subset of state.ptkb; empty (with a warning) on endpoint failure.
std::vector<PtkbStatement> select_provenance(const DialogueState& state,
                                             TextGenerator& generator,
                                             std::vector<std::string>* warnings = nullptr);

struct ChunkedPassages {
  std::vector<Passage> direct;
  std::vector<std::vector<Passage>> chunks;
};

// Keeps entries whose score strictly exceeds params.score_threshold,
// truncates to num_passages, takes the first num_direct_passages as direct
// inputs and partitions the rest, in rank order, into contiguous chunks of
// summary_chunk_size (the last chunk may be smaller). A docid missing from
// the corpus is a hard error.
ChunkedPassages filter_and_chunk(const RankedList& list, const Corpus& corpus,
                                 const GenerationParams& params);

// One summarization call per chunk, output aligned to chunk order. A failed
// chunk falls back to the concatenated first sentences of its passages.
std::vector<std::string> summarize_chunks(std::span<const std::vector<Passage>> chunks,
                                          TextGenerator& generator,
                                          std::vector<std::string>* warnings = nullptr);

struct ResponseResult {
  std::string text;
  bool degraded = false;
};

// Assembles the mode-specific response prompt (interactive: history,
// utterance, query, passages, profile; offline: history, utterance,
// passages+summaries, profile) and returns the endpoint text. Interactive
// mode requires a rewritten query. With no evidence at all the templated
// insufficient-evidence answer is returned without calling the endpoint;
// endpoint failure yields a templated apology with the degraded flag set.
ResponseResult generate_response(const DialogueState& state,
                                 const GenerationInput& input, ResponseMode mode,
                                 TextGenerator& generator);

}  // namespace convsearch
