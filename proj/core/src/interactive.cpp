#include "convsearch/interactive.hpp"

#include <chrono>

#include "convsearch/errors.hpp"

namespace convsearch {

namespace {

using Clock = std::chrono::steady_clock;

// One retry on a failed call, then give up.
template <typename F>
auto with_retry(F&& call) {
  try {
    return call();
  } catch (const EndpointError&) {
    return call();
  }
}

}  // namespace

SessionTranscript run_interactive_session(InteractiveClient& client,
                                          const std::string& session_id,
                                          const RunConfig& config,
                                          const Services& services,
                                          const std::string& transcript_path) {
  config.validate();
  SessionTranscript transcript;
  std::vector<DialogueTurn> history;
  std::vector<PtkbStatement> ptkb;
  std::size_t turn_counter = 0;

  auto save = [&] {
    if (!transcript_path.empty()) {
      write_transcript(transcript.turns, transcript_path);
    }
  };

  while (true) {
    NextTurn next;
    try {
      next = with_retry([&] { return client.next(session_id); });
    } catch (const EndpointError& e) {
      transcript.aborted = true;
      transcript.abort_reason = e.what();
      save();
      return transcript;
    }
    if (next.end) {
      break;
    }
    ++turn_counter;
    for (const PtkbStatement& statement : next.ptkb) {
      ptkb.push_back(statement);
    }

    DialogueState state;
    state.dialogue_id = session_id;
    state.history = history;
    state.ptkb = ptkb;
    state.current.turn_id =
        next.turn_id.empty() ? std::to_string(turn_counter) : next.turn_id;
    state.current.utterance = next.utterance;

    const auto start = Clock::now();
    TurnResult result = run_turn(state, config, services);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    result.stage_latencies_ms["turn_total"] = wall_ms;
    result.over_budget = wall_ms > config.latency_budget_ms;

    SessionResponse reply;
    reply.response = result.response;
    for (const RankedEntry& entry : result.run_list.entries) {
      if (reply.passages.size() == 10) {
        break;
      }
      reply.passages.push_back(entry.docid);
    }
    reply.ptkb = result.ptkb_provenance;
    reply.rewrites = result.selected_queries;
    try {
      with_retry([&] { client.post_response(session_id, reply); return 0; });
    } catch (const EndpointError& e) {
      transcript.turns.push_back(std::move(result));
      transcript.aborted = true;
      transcript.abort_reason = e.what();
      save();
      return transcript;
    }

    DialogueTurn completed = state.current;
    completed.response = result.response;
    history.push_back(std::move(completed));
    ptkb = result.updated_ptkb.empty() ? ptkb : result.updated_ptkb;
    transcript.turns.push_back(std::move(result));
  }

  save();
  return transcript;
}

}  // namespace convsearch
