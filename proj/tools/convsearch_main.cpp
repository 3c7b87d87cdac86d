// convsearch: one binary exposing every pipeline stage as a subcommand.
// Exit codes: 0 success, 1 usage/validation error, 2 I/O or endpoint error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "convsearch/corpus_io.hpp"
#include "convsearch/errors.hpp"
#include "convsearch/evaluation.hpp"
#include "convsearch/fusion.hpp"
#include "convsearch/http_clients.hpp"
#include "convsearch/interactive.hpp"
#include "convsearch/inverted_index.hpp"
#include "convsearch/mock_server.hpp"
#include "convsearch/mock_services.hpp"
#include "convsearch/pipeline.hpp"
#include "convsearch/rerank.hpp"
#include "convsearch/rewrite.hpp"
#include "convsearch/run_config.hpp"

namespace {

using namespace convsearch;

// Service bundle owning either the in-process mocks or the HTTP clients.
struct ServiceBundle {
  std::unique_ptr<Corpus> corpus;
  std::unique_ptr<InvertedIndex> index;
  std::unique_ptr<TextGenerator> generator;
  std::unique_ptr<RewardScorer> reward;
  std::unique_ptr<RerankScorer> reranker;

  Services services() const {
    Services s;
    s.corpus = corpus.get();
    s.index = index.get();
    s.generator = generator.get();
    s.reward = reward.get();
    s.reranker = reranker.get();
    return s;
  }
};

std::string endpoint_base_or_env(const std::string& flag_value) {
  if (!flag_value.empty()) {
    return flag_value;
  }
  const char* env = std::getenv("CONVSEARCH_ENDPOINT_BASE");
  return env != nullptr ? env : "";
}

ServiceBundle make_services(const std::string& corpus_path,
                            const std::string& index_path, bool mock,
                            const std::string& endpoint_base,
                            std::uint64_t seed) {
  ServiceBundle bundle;
  bundle.corpus = std::make_unique<Corpus>(load_corpus(corpus_path));
  bundle.index = std::make_unique<InvertedIndex>(
      index_path.empty() ? build_index(*bundle.corpus)
                         : load_index(index_path));

  const std::string base = endpoint_base_or_env(endpoint_base);
  if (mock) {
    bundle.generator = std::make_unique<MockTextGenerator>(seed);
    bundle.reward = std::make_unique<LexicalRewardScorer>(*bundle.index);
    bundle.reranker = std::make_unique<LexicalRerankScorer>();
  } else if (!base.empty()) {
    bundle.generator = std::make_unique<HttpTextGenerator>(GenEndpoint{base});
    bundle.reward = std::make_unique<HttpRewardScorer>(RewardEndpoint{base});
    bundle.reranker = std::make_unique<HttpRerankScorer>(RerankEndpoint{base});
  } else {
    throw ValidationError(
        "choose --mock or provide --endpoint-base (or CONVSEARCH_ENDPOINT_BASE)");
  }
  return bundle;
}

std::vector<std::pair<std::string, std::string>> load_queries_tsv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open \"" + path + "\"");
  }
  std::vector<std::pair<std::string, std::string>> queries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected \"query_id<TAB>query text\"");
    }
    queries.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return queries;
}

RunConfig resolve_config(const std::string& config_path,
                         const std::string& builtin_name) {
  if (!config_path.empty() && !builtin_name.empty()) {
    throw ValidationError("use either --config or --builtin, not both");
  }
  if (!config_path.empty()) {
    return load_run_config(config_path);
  }
  if (!builtin_name.empty()) {
    auto configs = builtin_configs();
    auto it = configs.find(builtin_name);
    if (it == configs.end()) {
      throw ValidationError("unknown builtin config \"" + builtin_name + "\"");
    }
    return it->second;
  }
  throw ValidationError("one of --config or --builtin is required");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write \"" + out_path + "\"");
  }
  out << text;
}

// --- subcommand bodies -----------------------------------------------------

struct IndexArgs {
  std::string corpus, out, index, query, qid = "q", tag = "bm25";
  double k1 = 0.82, b = 0.68;
  std::size_t depth = 10;
};

int cmd_index_build(const IndexArgs& args) {
  const Corpus corpus = load_corpus(args.corpus);
  const InvertedIndex index = build_index(corpus, {args.k1, args.b});
  save_index(index, args.out);
  std::cerr << "indexed " << index.doc_count() << " docs, "
            << index.postings().size() << " terms -> " << args.out << "\n";
  return 0;
}

int cmd_index_search(const IndexArgs& args) {
  if (args.index.empty() == args.corpus.empty()) {
    throw ValidationError("provide exactly one of --index or --corpus");
  }
  const InvertedIndex index =
      args.index.empty() ? build_index(load_corpus(args.corpus), {args.k1, args.b})
                         : load_index(args.index);
  const RankedList list = retrieve(index, args.query, args.depth, args.qid);
  write_run({list}, args.tag, std::cout);
  return 0;
}

struct RetrieveArgs {
  std::string corpus, index, queries, query, qid = "q", tag = "bm25", out;
  std::size_t depth = 1000;
  double k1 = 0.82, b = 0.68;
};

int cmd_retrieve(const RetrieveArgs& args) {
  if (args.index.empty() == args.corpus.empty()) {
    throw ValidationError("provide exactly one of --index or --corpus");
  }
  if (args.queries.empty() == args.query.empty()) {
    throw ValidationError("provide exactly one of --queries or --query");
  }
  const InvertedIndex index =
      args.index.empty() ? build_index(load_corpus(args.corpus), {args.k1, args.b})
                         : load_index(args.index);

  std::vector<std::pair<std::string, std::string>> queries;
  if (!args.queries.empty()) {
    queries = load_queries_tsv(args.queries);
  } else {
    queries.emplace_back(args.qid, args.query);
  }

  std::vector<RankedList> lists;
  for (const auto& [qid, text] : queries) {
    RankedList list = retrieve(index, text, args.depth, qid);
    if (!list.entries.empty()) {
      lists.push_back(std::move(list));
    }
  }
  if (args.out.empty()) {
    write_run(lists, args.tag, std::cout);
  } else {
    write_run(lists, args.tag, args.out);
    std::cerr << "wrote " << lists.size() << " query groups -> " << args.out << "\n";
  }
  return 0;
}

struct RewriteArgs {
  std::string dialogues, strategy = "llm4cs", corpus, qrels, endpoint_base, out;
  std::size_t n = 10;
  std::uint64_t seed = 0;
  double temperature = 1.0;
  bool mock = false;
  bool select = false;
};

int cmd_rewrite(const RewriteArgs& args) {
  const RewriteStrategy& strategy = strategy_by_name(args.strategy);
  const auto states = load_dialogues(args.dialogues);

  std::unique_ptr<TextGenerator> generator;
  const std::string base = endpoint_base_or_env(args.endpoint_base);
  if (args.mock) {
    generator = std::make_unique<MockTextGenerator>(args.seed);
  } else if (!base.empty()) {
    generator = std::make_unique<HttpTextGenerator>(GenEndpoint{base});
  } else {
    throw ValidationError("choose --mock or provide --endpoint-base");
  }

  std::unique_ptr<Corpus> corpus;
  std::unique_ptr<InvertedIndex> index;
  std::unique_ptr<QrelSet> qrels;
  std::unique_ptr<RewardScorer> reward;
  if (args.select) {
    if (args.corpus.empty()) {
      throw ValidationError("--select needs --corpus for the lexical reward");
    }
    corpus = std::make_unique<Corpus>(load_corpus(args.corpus));
    index = std::make_unique<InvertedIndex>(build_index(*corpus));
    if (!args.qrels.empty()) {
      qrels = std::make_unique<QrelSet>(read_qrels(args.qrels));
    }
    reward = std::make_unique<LexicalRewardScorer>(*index, qrels.get());
  }

  std::ostringstream out;
  for (const DialogueState& state : states) {
    std::vector<std::string> warnings;
    CandidateSet set = generate_candidates(state, strategy, args.n, *generator,
                                           args.temperature, &warnings);
    nlohmann::json j;
    j["query_id"] = query_id(state);
    j["strategy"] = strategy.name;
    if (args.select) {
      j["selected"] = best_of_n(set, state, *reward, &warnings).text;
    }
    auto& candidates = j["candidates"] = nlohmann::json::array();
    for (const RewriteCandidate& candidate : set.candidates) {
      nlohmann::json c = {{"text", candidate.text},
                          {"generation_index", candidate.generation_index}};
      if (candidate.reward.has_value()) {
        c["reward"] = candidate.reward.value();
      }
      candidates.push_back(std::move(c));
    }
    j["warnings"] = warnings;
    out << j.dump() << "\n";
  }
  emit(out.str(), args.out);
  return 0;
}

struct FuseArgs {
  std::vector<std::string> inputs;
  double k = 60.0;
  std::size_t depth = 1000;
  std::string tag = "fused", out;
};

int cmd_fuse(const FuseArgs& args) {
  std::map<std::string, std::vector<RankedList>> by_query;
  for (const std::string& path : args.inputs) {
    for (RankedList& list : read_run(path)) {
      by_query[list.query_id].push_back(std::move(list));
    }
  }

  const RrfConfig config{args.k, args.depth};
  std::vector<RankedList> fused;  // query groups in ascending query_id order
  fused.reserve(by_query.size());
  for (auto& [qid, lists] : by_query) {
    fused.push_back(rrf_fuse(lists, config));
  }
  if (args.out.empty()) {
    write_run(fused, args.tag, std::cout);
  } else {
    write_run(fused, args.tag, args.out);
    std::cerr << "fused " << args.inputs.size() << " runs, " << fused.size()
              << " query groups -> " << args.out << "\n";
  }
  return 0;
}

struct RerankArgs {
  std::string run, corpus, queries, endpoint_base, tag = "reranked", out;
  std::size_t top_n = 1000;
  bool mock = false;
};

int cmd_rerank(const RerankArgs& args) {
  const Corpus corpus = load_corpus(args.corpus);
  const auto lists = read_run(args.run);
  std::map<std::string, std::string> query_text;
  for (const auto& [qid, text] : load_queries_tsv(args.queries)) {
    query_text[qid] = text;
  }

  std::unique_ptr<RerankScorer> scorer;
  const std::string base = endpoint_base_or_env(args.endpoint_base);
  if (args.mock) {
    scorer = std::make_unique<LexicalRerankScorer>();
  } else if (!base.empty()) {
    scorer = std::make_unique<HttpRerankScorer>(RerankEndpoint{base});
  } else {
    throw ValidationError("choose --mock or provide --endpoint-base");
  }

  std::vector<RankedList> reranked;
  std::size_t degraded = 0;
  for (const RankedList& list : lists) {
    auto it = query_text.find(list.query_id);
    if (it == query_text.end()) {
      throw ValidationError("no query text for query_id \"" + list.query_id +
                            "\" in " + args.queries);
    }
    RerankResult result = rerank(it->second, list, corpus, *scorer, args.top_n);
    degraded += result.degraded ? 1 : 0;
    reranked.push_back(std::move(result.list));
  }
  if (degraded > 0) {
    std::cerr << degraded << " queries kept their original order (scorer failure)\n";
  }
  if (args.out.empty()) {
    write_run(reranked, args.tag, std::cout);
  } else {
    write_run(reranked, args.tag, args.out);
    std::cerr << "reranked " << reranked.size() << " query groups -> "
              << args.out << "\n";
  }
  return 0;
}

struct PipelineArgs {
  std::string config, builtin, dump_config, corpus, index, dialogues;
  std::string endpoint_base, out_run, transcript;
  bool mock = false;
  bool list_builtins = false;
  std::size_t jobs = 1;
};

int cmd_pipeline(const PipelineArgs& args) {
  if (args.list_builtins) {
    for (const auto& [name, config] : builtin_configs()) {
      std::cout << name << "\n";
    }
    return 0;
  }
  if (!args.dump_config.empty()) {
    auto configs = builtin_configs();
    auto it = configs.find(args.dump_config);
    if (it == configs.end()) {
      throw ValidationError("unknown builtin config \"" + args.dump_config + "\"");
    }
    std::cout << run_config_to_json(it->second);
    return 0;
  }

  const RunConfig config = resolve_config(args.config, args.builtin);
  if (args.corpus.empty() || args.dialogues.empty()) {
    throw ValidationError("--corpus and --dialogues are required");
  }
  const auto bundle = make_services(args.corpus, args.index, args.mock,
                                    args.endpoint_base, config.seed);
  std::vector<std::string> warnings;
  const auto dialogues = load_dialogue_file(args.dialogues, &warnings);
  for (const std::string& warning : warnings) {
    std::cerr << "warning: " << warning << "\n";
  }

  const std::string run_path =
      args.out_run.empty() ? config.name + ".run" : args.out_run;
  const std::string transcript_path =
      args.transcript.empty() ? config.name + ".transcript.jsonl" : args.transcript;

  const auto results = run_batch(dialogues, config, bundle.services(), run_path,
                                 transcript_path,
                                 /*deterministic_transcript=*/args.mock, args.jobs);

  std::size_t over_budget = 0;
  std::size_t degraded = 0;
  for (const TurnResult& result : results) {
    over_budget += result.over_budget ? 1 : 0;
    degraded += (result.rerank_degraded || result.response_degraded) ? 1 : 0;
  }
  std::cerr << "ran " << results.size() << " turns (" << dialogues.size()
            << " dialogues) with config " << config.name << "\n"
            << "run file:   " << run_path << "\n"
            << "transcript: " << transcript_path << "\n";
  if (over_budget > 0) {
    std::cerr << over_budget << " turns over the latency budget\n";
  }
  if (degraded > 0) {
    std::cerr << degraded << " turns degraded\n";
  }
  return 0;
}

struct InteractiveArgs {
  std::string config, builtin, corpus, index, base_url, session = "s1";
  std::string endpoint_base, transcript;
  bool mock = false;
  double budget_ms = 0.0;
};

int cmd_interactive(const InteractiveArgs& args) {
  RunConfig config = resolve_config(args.config, args.builtin);
  if (args.budget_ms > 0.0) {
    config.latency_budget_ms = args.budget_ms;
  }
  const auto bundle = make_services(args.corpus, args.index, args.mock,
                                    args.endpoint_base, config.seed);
  InteractiveClient client(args.base_url);
  const SessionTranscript transcript = run_interactive_session(
      client, args.session, config, bundle.services(), args.transcript);

  std::size_t over_budget = 0;
  for (const TurnResult& result : transcript.turns) {
    over_budget += result.over_budget ? 1 : 0;
  }
  std::cerr << "session " << args.session << ": " << transcript.turns.size()
            << " turns, " << over_budget << " over budget";
  if (transcript.aborted) {
    std::cerr << ", aborted: " << transcript.abort_reason;
  }
  std::cerr << "\n";
  return transcript.aborted ? 2 : 0;
}

struct EvalArgs {
  std::string run, qrels, json_out, gain = "exponential";
  std::size_t ndcg_k = 10, mrr_k = 1000;
};

int cmd_eval(const EvalArgs& args) {
  GainVariant gain;
  if (args.gain == "exponential") {
    gain = GainVariant::exponential;
  } else if (args.gain == "linear") {
    gain = GainVariant::linear;
  } else {
    throw ValidationError("--gain must be exponential or linear");
  }
  const MetricReport report =
      evaluate_run(args.run, args.qrels, args.ndcg_k, args.mrr_k, gain);
  std::cout << format_metric_table(report);
  if (!args.json_out.empty()) {
    emit(metric_report_json(report) + "\n", args.json_out);
    std::cerr << "report: " << args.json_out << "\n";
  }
  return 0;
}

struct MockServeArgs {
  std::string corpus, dialogues, host = "127.0.0.1";
  int port = 8089;
  std::uint64_t seed = 0;
};

int cmd_mock_serve(const MockServeArgs& args) {
  Corpus corpus = load_corpus(args.corpus);
  std::vector<Dialogue> sessions;
  if (!args.dialogues.empty()) {
    sessions = load_dialogue_file(args.dialogues);
  }
  MockServer server(std::move(corpus), args.seed, std::move(sessions));
  const int port = server.start(args.host, args.port);
  std::cerr << "mock endpoints listening on http://" << args.host << ":" << port
            << " (generate, reward, rerank, session)\n";
  while (true) {
    std::this_thread::sleep_for(std::chrono::hours(1));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conversational search pipeline toolkit"};
  app.require_subcommand(1);

  IndexArgs index_args;
  auto* index = app.add_subcommand("index", "build or query a BM25 index");
  index->require_subcommand(1);
  auto* index_build = index->add_subcommand("build", "build an index from a JSONL corpus");
  index_build->add_option("--corpus", index_args.corpus, "JSONL corpus file")->required();
  index_build->add_option("--out", index_args.out, "output index file")->required();
  index_build->add_option("--k1", index_args.k1, "BM25 k1");
  index_build->add_option("--b", index_args.b, "BM25 b");
  auto* index_search = index->add_subcommand("search", "run one query, TREC lines to stdout");
  index_search->add_option("--index", index_args.index, "index file from `index build`");
  index_search->add_option("--corpus", index_args.corpus, "JSONL corpus (indexed on the fly)");
  index_search->add_option("--query", index_args.query, "query text")->required();
  index_search->add_option("--qid", index_args.qid, "query id for the output");
  index_search->add_option("--depth", index_args.depth, "number of results");
  index_search->add_option("--tag", index_args.tag, "run tag");

  RetrieveArgs retrieve_args;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "BM25 retrieval into a TREC run file");
  retrieve_cmd->add_option("--corpus", retrieve_args.corpus, "JSONL corpus file");
  retrieve_cmd->add_option("--index", retrieve_args.index, "prebuilt index file");
  retrieve_cmd->add_option("--queries", retrieve_args.queries, "TSV file: query_id<TAB>query");
  retrieve_cmd->add_option("--query", retrieve_args.query, "single query text");
  retrieve_cmd->add_option("--qid", retrieve_args.qid, "query id for --query");
  retrieve_cmd->add_option("--depth", retrieve_args.depth, "retrieval depth");
  retrieve_cmd->add_option("--tag", retrieve_args.tag, "run tag");
  retrieve_cmd->add_option("--out", retrieve_args.out, "output run file (stdout if omitted)");
  retrieve_cmd->add_option("--k1", retrieve_args.k1, "BM25 k1");
  retrieve_cmd->add_option("--b", retrieve_args.b, "BM25 b");

  RewriteArgs rewrite_args;
  auto* rewrite_cmd = app.add_subcommand("rewrite", "generate rewrite candidates per turn");
  rewrite_cmd->add_option("--dialogues", rewrite_args.dialogues, "dialogue JSON file")->required();
  rewrite_cmd->add_option("--strategy", rewrite_args.strategy, "llm4cs, llm4cs_no_pr, chiq_ad, chiq_ad_no_hs or passthrough");
  rewrite_cmd->add_option("--n", rewrite_args.n, "candidates per turn");
  rewrite_cmd->add_option("--seed", rewrite_args.seed, "mock generator seed");
  rewrite_cmd->add_option("--temperature", rewrite_args.temperature, "sampling temperature");
  rewrite_cmd->add_flag("--mock", rewrite_args.mock, "use the in-process mock generator");
  rewrite_cmd->add_option("--endpoint-base", rewrite_args.endpoint_base, "generation endpoint base URL");
  rewrite_cmd->add_flag("--select", rewrite_args.select, "also pick the best candidate (lexical reward)");
  rewrite_cmd->add_option("--corpus", rewrite_args.corpus, "corpus for the lexical reward");
  rewrite_cmd->add_option("--qrels", rewrite_args.qrels, "qrels for the reciprocal-rank reward");
  rewrite_cmd->add_option("--out", rewrite_args.out, "output JSONL (stdout if omitted)");

  FuseArgs fuse_args;
  auto* fuse_cmd = app.add_subcommand("fuse", "reciprocal rank fusion of run files");
  fuse_cmd->add_option("--in", fuse_args.inputs, "input run file (repeatable)")->required();
  fuse_cmd->add_option("--k", fuse_args.k, "RRF rank offset");
  fuse_cmd->add_option("--depth", fuse_args.depth, "fused output depth");
  fuse_cmd->add_option("--tag", fuse_args.tag, "run tag");
  fuse_cmd->add_option("--out", fuse_args.out, "output run file (stdout if omitted)");

  RerankArgs rerank_args;
  auto* rerank_cmd = app.add_subcommand("rerank", "rescore a run file");
  rerank_cmd->add_option("--run", rerank_args.run, "input run file")->required();
  rerank_cmd->add_option("--corpus", rerank_args.corpus, "JSONL corpus file")->required();
  rerank_cmd->add_option("--queries", rerank_args.queries, "TSV file: query_id<TAB>query")->required();
  rerank_cmd->add_option("--top-n", rerank_args.top_n, "keep the top N after rescoring");
  rerank_cmd->add_flag("--mock", rerank_args.mock, "use the lexical overlap scorer");
  rerank_cmd->add_option("--endpoint-base", rerank_args.endpoint_base, "rerank endpoint base URL");
  rerank_cmd->add_option("--tag", rerank_args.tag, "run tag");
  rerank_cmd->add_option("--out", rerank_args.out, "output run file (stdout if omitted)");

  PipelineArgs pipeline_args;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "run a full batch pipeline");
  pipeline_cmd->add_option("--config", pipeline_args.config, "run config JSON file");
  pipeline_cmd->add_option("--builtin", pipeline_args.builtin, "builtin config name");
  pipeline_cmd->add_flag("--list-builtins", pipeline_args.list_builtins, "list builtin config names");
  pipeline_cmd->add_option("--dump-config", pipeline_args.dump_config, "print a builtin config as JSON");
  pipeline_cmd->add_option("--corpus", pipeline_args.corpus, "JSONL corpus file");
  pipeline_cmd->add_option("--index", pipeline_args.index, "prebuilt index file");
  pipeline_cmd->add_option("--dialogues", pipeline_args.dialogues, "dialogue JSON file");
  pipeline_cmd->add_flag("--mock", pipeline_args.mock, "in-process deterministic services, no network");
  pipeline_cmd->add_option("--endpoint-base", pipeline_args.endpoint_base, "base URL serving /generate, /reward, /rerank");
  pipeline_cmd->add_option("--out-run", pipeline_args.out_run, "run file (default <config>.run)");
  pipeline_cmd->add_option("--transcript", pipeline_args.transcript, "transcript JSONL (default <config>.transcript.jsonl)");
  pipeline_cmd->add_option("--jobs", pipeline_args.jobs, "dialogues processed in parallel");

  InteractiveArgs interactive_args;
  auto* interactive_cmd = app.add_subcommand("interactive", "drive a live user session");
  interactive_cmd->add_option("--config", interactive_args.config, "run config JSON file");
  interactive_cmd->add_option("--builtin", interactive_args.builtin, "builtin config name");
  interactive_cmd->add_option("--corpus", interactive_args.corpus, "JSONL corpus file")->required();
  interactive_cmd->add_option("--index", interactive_args.index, "prebuilt index file");
  interactive_cmd->add_option("--base-url", interactive_args.base_url, "session service base URL")->required();
  interactive_cmd->add_option("--session", interactive_args.session, "session id");
  interactive_cmd->add_flag("--mock", interactive_args.mock, "in-process generation/reward/rerank services");
  interactive_cmd->add_option("--endpoint-base", interactive_args.endpoint_base, "base URL for HTTP services");
  interactive_cmd->add_option("--transcript", interactive_args.transcript, "transcript JSONL output");
  interactive_cmd->add_option("--budget-ms", interactive_args.budget_ms, "per-turn latency budget override");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "nDCG/MRR evaluation of a run file");
  eval_cmd->add_option("--run", eval_args.run, "TREC run file")->required();
  eval_cmd->add_option("--qrels", eval_args.qrels, "TREC qrels file")->required();
  eval_cmd->add_option("--ndcg-k", eval_args.ndcg_k, "nDCG cutoff");
  eval_cmd->add_option("--mrr-k", eval_args.mrr_k, "MRR cutoff");
  eval_cmd->add_option("--gain", eval_args.gain, "gain variant: exponential or linear");
  eval_cmd->add_option("--json", eval_args.json_out, "also write the report as JSON");

  MockServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("mock-serve", "serve the deterministic mock endpoints");
  serve_cmd->add_option("--corpus", serve_args.corpus, "JSONL corpus file")->required();
  serve_cmd->add_option("--dialogues", serve_args.dialogues, "dialogue JSON for scripted sessions");
  serve_cmd->add_option("--host", serve_args.host, "bind host");
  serve_cmd->add_option("--port", serve_args.port, "bind port (0 picks a free one)");
  serve_cmd->add_option("--seed", serve_args.seed, "mock generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (index_build->parsed()) return cmd_index_build(index_args);
    if (index_search->parsed()) return cmd_index_search(index_args);
    if (retrieve_cmd->parsed()) return cmd_retrieve(retrieve_args);
    if (rewrite_cmd->parsed()) return cmd_rewrite(rewrite_args);
    if (fuse_cmd->parsed()) return cmd_fuse(fuse_args);
    if (rerank_cmd->parsed()) return cmd_rerank(rerank_args);
    if (pipeline_cmd->parsed()) return cmd_pipeline(pipeline_args);
    if (interactive_cmd->parsed()) return cmd_interactive(interactive_args);
    if (eval_cmd->parsed()) return cmd_eval(eval_args);
    if (serve_cmd->parsed()) return cmd_mock_serve(serve_args);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
