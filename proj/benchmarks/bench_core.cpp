#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "convsearch/evaluation.hpp"
#include "convsearch/fusion.hpp"
#include "convsearch/inverted_index.hpp"
#include "convsearch/rerank.hpp"
#include "convsearch/tokenizer.hpp"

namespace {

using namespace convsearch;

Corpus synthetic_corpus(std::size_t docs, std::size_t words_per_doc) {
  static const char* vocab[] = {
      "alpha", "bravo", "charlie", "delta", "echo",  "foxtrot", "golf",
      "hotel", "india", "juliet",  "kilo",  "lima",  "mike",    "november",
      "oscar", "papa",  "quebec",  "romeo", "sierra", "tango"};
  std::mt19937 gen(7);
  Corpus corpus;
  for (std::size_t d = 0; d < docs; ++d) {
    std::ostringstream text;
    for (std::size_t w = 0; w < words_per_doc; ++w) {
      text << vocab[gen() % std::size(vocab)] << ' ';
    }
    corpus.add({"d" + std::to_string(d), text.str()});
  }
  return corpus;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text =
      "Conversational search, extends beyond TRADITIONAL ad-hoc retrieval! "
      "BM25-scores rank passages; rewrites resolve ellipsis/coreference.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(tokenize(text));
  }
}
BENCHMARK(BM_Tokenize);

void BM_BuildIndex(benchmark::State& state) {
  const Corpus corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 40);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_index(corpus));
  }
}
BENCHMARK(BM_BuildIndex)->Arg(1000)->Arg(5000);

void BM_Retrieve(benchmark::State& state) {
  const Corpus corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 40);
  const InvertedIndex index = build_index(corpus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(retrieve(index, "alpha tango echo kilo", 1000));
  }
}
BENCHMARK(BM_Retrieve)->Arg(1000)->Arg(5000);

void BM_RrfFuse(benchmark::State& state) {
  std::mt19937 gen(11);
  std::vector<RankedList> lists;
  for (int l = 0; l < 5; ++l) {
    std::vector<std::pair<std::string, double>> scored;
    for (int d = 0; d < 1000; ++d) {
      scored.emplace_back("d" + std::to_string((d * 7 + l * 131) % 3000),
                          3000.0 - d);
    }
    lists.push_back(make_ranked_list("q", std::move(scored)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(rrf_fuse(lists, {60.0, 1000}));
  }
}
BENCHMARK(BM_RrfFuse);

void BM_Ndcg(benchmark::State& state) {
  std::mt19937 gen(13);
  QrelSet qrels;
  std::vector<std::pair<std::string, double>> scored;
  for (int d = 0; d < 1000; ++d) {
    const std::string docid = "d" + std::to_string(d);
    if (gen() % 5 == 0) {
      qrels.set("q", docid, 1 + static_cast<int>(gen() % 3));
    }
    scored.emplace_back(docid, 1000.0 - d);
  }
  const RankedList list = make_ranked_list("q", std::move(scored));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ndcg_at_k(list, qrels, 10));
    benchmark::DoNotOptimize(mrr_at_k(list, qrels, 1000));
  }
}
BENCHMARK(BM_Ndcg);

void BM_LexicalRerankScore(benchmark::State& state) {
  const std::string query = "alpha tango echo kilo lima";
  const std::string passage =
      "alpha bravo charlie delta echo foxtrot golf hotel india juliet kilo "
      "lima mike november oscar papa quebec romeo sierra tango";
  for (auto _ : state) {
    benchmark::DoNotOptimize(lexical_overlap_f1(query, passage));
  }
}
BENCHMARK(BM_LexicalRerankScore);

}  // namespace

BENCHMARK_MAIN();
