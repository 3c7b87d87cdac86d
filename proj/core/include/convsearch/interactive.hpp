#pragma once

#include <string>
#include <vector>

#include "convsearch/http_clients.hpp"
#include "convsearch/pipeline.hpp"

namespace convsearch {

struct SessionTranscript {
  std::vector<TurnResult> turns;
  bool aborted = false;
  std::string abort_reason;
};

// Drives one live session: fetch the next utterance, run the turn, post the
// response with its top-10 passages, provenance ids and rewrites, repeat
// until the service signals the end. Each turn's wall clock is checked
// against config.latency_budget_ms. An endpoint timeout is retried once;
// a second failure aborts with the partial transcript preserved (and
// written to transcript_path when given).
SessionTranscript run_interactive_session(InteractiveClient& client,
                                          const std::string& session_id,
                                          const RunConfig& config,
                                          const Services& services,
                                          const std::string& transcript_path = "");

}  // namespace convsearch
