#include "convsearch/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "convsearch/corpus_io.hpp"
#include "convsearch/errors.hpp"
#include "convsearch/fusion.hpp"
#include "convsearch/generation.hpp"
#include "convsearch/rerank.hpp"
#include "convsearch/rewrite.hpp"

namespace convsearch {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void require_services(const RunConfig& config, const Services& services) {
  if (services.corpus == nullptr || services.index == nullptr ||
      services.generator == nullptr || services.reranker == nullptr) {
    throw ValidationError("pipeline services incomplete");
  }
  if (config.selection == Selection::best_of_n && services.reward == nullptr) {
    throw ValidationError("best_of_n selection needs a reward scorer");
  }
}

// Candidate generation plus selection; returns the query strings to retrieve.
std::vector<std::string> select_queries(const DialogueState& state,
                                        const RunConfig& config,
                                        const Services& services,
                                        std::vector<std::string>* warnings) {
  std::vector<CandidateSet> sets;
  sets.reserve(config.strategies.size());
  for (const std::string& name : config.strategies) {
    sets.push_back(generate_candidates(state, strategy_by_name(name),
                                       config.n_candidates, *services.generator,
                                       config.temperature, warnings));
  }

  std::vector<std::string> queries;
  if (config.selection == Selection::all) {
    std::unordered_set<std::string> seen;
    for (const CandidateSet& set : sets) {
      for (const RewriteCandidate& candidate : set.candidates) {
        if (seen.insert(candidate.text).second) {
          queries.push_back(candidate.text);
        }
      }
    }
    return queries;
  }

  if (config.selection_scope == SelectionScope::pooled) {
    CandidateSet pooled;
    pooled.n_target = config.n_candidates * std::max<std::size_t>(1, sets.size());
    std::unordered_set<std::string> seen;
    for (const CandidateSet& set : sets) {
      for (const RewriteCandidate& candidate : set.candidates) {
        if (seen.insert(candidate.text).second) {
          RewriteCandidate pooled_candidate = candidate;
          pooled_candidate.generation_index = pooled.candidates.size();
          pooled.candidates.push_back(std::move(pooled_candidate));
        }
      }
    }
    queries.push_back(
        best_of_n(pooled, state, *services.reward, warnings).text);
    return queries;
  }

  std::unordered_set<std::string> seen;
  for (CandidateSet& set : sets) {
    const std::string winner =
        best_of_n(set, state, *services.reward, warnings).text;
    if (seen.insert(winner).second) {
      queries.push_back(winner);
    }
  }
  return queries;
}

// Word-level union of the selected queries, first occurrence wins. Multiple
// rewrites usually share the utterance; repeating it would skew any
// overlap-based reranker toward the common words.
std::string joined_query(std::span<const std::string> queries) {
  std::string out;
  std::unordered_set<std::string> seen;
  for (const std::string& query : queries) {
    std::istringstream words(query);
    std::string word;
    while (words >> word) {
      if (seen.insert(word).second) {
        if (!out.empty()) {
          out += ' ';
        }
        out += word;
      }
    }
  }
  return out;
}

std::vector<Passage> top_passages(const RankedList& list, const Corpus& corpus,
                                  std::size_t n) {
  std::vector<Passage> passages;
  for (const RankedEntry& entry : list.entries) {
    if (passages.size() == n) {
      break;
    }
    const Passage* passage = corpus.find(entry.docid);
    if (passage == nullptr) {
      throw ValidationError("docid \"" + entry.docid + "\" not in corpus");
    }
    passages.push_back(*passage);
  }
  return passages;
}

}  // namespace

TurnResult run_turn(const DialogueState& state, const RunConfig& config,
                    const Services& services) {
  config.validate();
  require_services(config, services);

  TurnResult result;
  result.query_id = query_id(state);
  result.history_len = state.history.size();
  const auto turn_start = Clock::now();

  // Stage 1: rewrite and select.
  auto stage_start = Clock::now();
  result.selected_queries =
      select_queries(state, config, services, &result.warnings);
  result.stage_latencies_ms["rewrite"] = ms_since(stage_start);

  // Stage 2: retrieval per selected query.
  stage_start = Clock::now();
  std::vector<RankedList> lists;
  lists.reserve(result.selected_queries.size());
  for (const std::string& query : result.selected_queries) {
    lists.push_back(retrieve(*services.index, query, config.retrieval_depth,
                             result.query_id));
  }
  result.stage_latencies_ms["retrieve"] = ms_since(stage_start);

  // Stage 3: fusion and reranking in the configured order.
  const std::string rerank_query = joined_query(result.selected_queries);
  RankedList final_list;
  final_list.query_id = result.query_id;

  const bool any_hits = std::any_of(lists.begin(), lists.end(), [](const auto& l) {
    return !l.entries.empty();
  });
  if (!any_hits) {
    result.warnings.push_back("retrieval returned nothing for every query");
    result.stage_latencies_ms["fuse"] = 0.0;
    result.stage_latencies_ms["rerank"] = 0.0;
  } else {
    switch (config.fusion_order) {
      case FusionOrder::rrf_first: {
        stage_start = Clock::now();
        RankedList fused = rrf_fuse(lists, config.rrf);
        result.stage_latencies_ms["fuse"] = ms_since(stage_start);

        stage_start = Clock::now();
        RerankResult reranked = rerank(rerank_query, fused, *services.corpus,
                                       *services.reranker, config.rerank_top_n);
        result.stage_latencies_ms["rerank"] = ms_since(stage_start);
        result.rerank_degraded = reranked.degraded;
        final_list = std::move(reranked.list);
        break;
      }
      case FusionOrder::rerank_first: {
        stage_start = Clock::now();
        std::vector<RankedList> reranked_lists;
        reranked_lists.reserve(lists.size());
        for (std::size_t i = 0; i < lists.size(); ++i) {
          if (lists[i].entries.empty()) {
            reranked_lists.push_back(lists[i]);
            continue;
          }
          RerankResult reranked =
              rerank(result.selected_queries[i], lists[i], *services.corpus,
                     *services.reranker, config.rerank_top_n);
          result.rerank_degraded = result.rerank_degraded || reranked.degraded;
          reranked_lists.push_back(std::move(reranked.list));
        }
        result.stage_latencies_ms["rerank"] = ms_since(stage_start);

        stage_start = Clock::now();
        final_list = rrf_fuse(reranked_lists, config.rrf);
        if (final_list.entries.size() > config.rerank_top_n) {
          final_list.entries.resize(config.rerank_top_n);
        }
        result.stage_latencies_ms["fuse"] = ms_since(stage_start);
        break;
      }
      case FusionOrder::none: {
        if (lists.size() != 1) {
          throw ValidationError("fusion_order none with " +
                                std::to_string(lists.size()) + " lists");
        }
        result.stage_latencies_ms["fuse"] = 0.0;
        stage_start = Clock::now();
        RerankResult reranked =
            rerank(rerank_query, lists.front(), *services.corpus,
                   *services.reranker, config.rerank_top_n);
        result.stage_latencies_ms["rerank"] = ms_since(stage_start);
        result.rerank_degraded = reranked.degraded;
        final_list = std::move(reranked.list);
        break;
      }
    }
  }
  result.run_list = std::move(final_list);

  // Stage 4: response preparation and generation.
  stage_start = Clock::now();
  DialogueState working_state = state;
  GenerationInput input;
  if (config.response_mode == ResponseMode::interactive) {
    input.rewritten_query = rerank_query;
    input.direct_passages = top_passages(result.run_list, *services.corpus, 10);
    const auto provenance =
        select_provenance(working_state, *services.generator, &result.warnings);
    for (const PtkbStatement& statement : provenance) {
      result.ptkb_provenance.push_back(statement.id);
    }
    input.provenance = provenance;
    result.updated_ptkb = state.ptkb;
  } else {
    result.updated_ptkb =
        update_ptkb(working_state, *services.generator, &result.warnings);
    if (result.updated_ptkb.size() > state.ptkb.size()) {
      result.ptkb_added.assign(result.updated_ptkb.begin() + state.ptkb.size(),
                               result.updated_ptkb.end());
    }
    working_state.ptkb = result.updated_ptkb;
    const auto provenance =
        select_provenance(working_state, *services.generator, &result.warnings);
    for (const PtkbStatement& statement : provenance) {
      result.ptkb_provenance.push_back(statement.id);
    }
    input.provenance = provenance;

    ChunkedPassages chunked =
        filter_and_chunk(result.run_list, *services.corpus, config.generation);
    input.direct_passages = std::move(chunked.direct);
    input.summaries =
        summarize_chunks(chunked.chunks, *services.generator, &result.warnings);
    if (config.offline_query_in_prompt) {
      input.rewritten_query = rerank_query;
    }
  }
  ResponseResult response = generate_response(working_state, input,
                                              config.response_mode,
                                              *services.generator);
  result.response = std::move(response.text);
  result.response_degraded = response.degraded;
  result.stage_latencies_ms["generate"] = ms_since(stage_start);

  result.over_budget = ms_since(turn_start) > config.latency_budget_ms;
  return result;
}

namespace {

std::vector<TurnResult> run_dialogue(const Dialogue& dialogue,
                                     const RunConfig& config,
                                     const Services& services) {
  std::vector<TurnResult> results;
  results.reserve(dialogue.turns.size());

  std::vector<DialogueTurn> history;
  std::vector<PtkbStatement> ptkb = dialogue.ptkb;
  for (const DialogueTurn& turn : dialogue.turns) {
    DialogueState state;
    state.dialogue_id = dialogue.dialogue_id;
    state.history = history;
    state.ptkb = ptkb;
    state.current = turn;
    state.current.response.reset();

    TurnResult result = run_turn(state, config, services);

    DialogueTurn completed = turn;
    completed.response = config.thread_gold_history
                             ? turn.response.value_or(result.response)
                             : result.response;
    history.push_back(std::move(completed));
    if (config.response_mode == ResponseMode::offline) {
      ptkb = result.updated_ptkb;  // thread K_t forward
    }
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace

std::vector<TurnResult> run_batch(std::span<const Dialogue> dialogues,
                                  const RunConfig& config, const Services& services,
                                  const std::string& run_path,
                                  const std::string& transcript_path,
                                  bool deterministic_transcript, std::size_t jobs) {
  config.validate();
  require_services(config, services);

  std::vector<std::vector<TurnResult>> per_dialogue(dialogues.size());
  if (jobs <= 1 || dialogues.size() <= 1) {
    for (std::size_t i = 0; i < dialogues.size(); ++i) {
      per_dialogue[i] = run_dialogue(dialogues[i], config, services);
    }
  } else {
    // Dialogues are independent; turns within one stay sequential. Workers
    // claim dialogue indices, so each slot is written by exactly one thread.
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < dialogues.size();
           i = next.fetch_add(1)) {
        try {
          per_dialogue[i] = run_dialogue(dialogues[i], config, services);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, dialogues.size()); ++t) {
      pool.emplace_back(worker);
    }
    for (std::thread& thread : pool) {
      thread.join();
    }
    if (first_error) {
      std::rethrow_exception(first_error);
    }
  }

  std::vector<TurnResult> results;
  std::vector<RankedList> lists;
  for (auto& dialogue_results : per_dialogue) {
    for (TurnResult& result : dialogue_results) {
      if (!result.run_list.entries.empty()) {
        lists.push_back(result.run_list);
      }
      results.push_back(std::move(result));
    }
  }

  if (!run_path.empty()) {
    write_run(lists, config.name, run_path);
  }
  if (!transcript_path.empty()) {
    write_transcript(results, transcript_path, deterministic_transcript);
  }
  return results;
}

std::string turn_result_json(const TurnResult& result, bool deterministic) {
  json j;
  j["query_id"] = result.query_id;
  j["history_len"] = result.history_len;
  j["selected_queries"] = result.selected_queries;
  auto& run = j["run"] = json::array();
  for (const RankedEntry& entry : result.run_list.entries) {
    run.push_back({{"docid", entry.docid}, {"score", entry.score},
                   {"rank", entry.rank}});
  }
  j["response"] = result.response;
  j["ptkb_provenance"] = result.ptkb_provenance;
  auto& added = j["ptkb_added"] = json::array();
  for (const PtkbStatement& statement : result.ptkb_added) {
    added.push_back({{"id", statement.id}, {"text", statement.text}});
  }
  j["rerank_degraded"] = result.rerank_degraded;
  j["response_degraded"] = result.response_degraded;
  j["warnings"] = result.warnings;
  if (!deterministic) {
    // Wall-clock fields vary run to run; deterministic transcripts drop them.
    auto& latencies = j["stage_latencies_ms"] = json::object();
    for (const auto& [stage, ms] : result.stage_latencies_ms) {
      latencies[stage] = ms;
    }
    j["over_budget"] = result.over_budget;
  }
  return j.dump();
}

void write_transcript(std::span<const TurnResult> turns, const std::string& path,
                      bool deterministic) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write \"" + path + "\"");
  }
  for (const TurnResult& result : turns) {
    out << turn_result_json(result, deterministic) << '\n';
  }
  if (!out.flush()) {
    throw IoError("write failed for \"" + path + "\"");
  }
}

}  // namespace convsearch
