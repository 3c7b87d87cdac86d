#include <doctest.h>

#include <map>

#include "convsearch/errors.hpp"
#include "convsearch/mock_services.hpp"
#include "convsearch/rerank.hpp"

using namespace convsearch;

namespace {

Corpus corpus_of(const std::vector<std::pair<std::string, std::string>>& docs) {
  Corpus corpus;
  for (const auto& [docid, text] : docs) {
    corpus.add({docid, text});
  }
  return corpus;
}

RankedList list_of(const std::vector<std::string>& docids) {
  std::vector<std::pair<std::string, double>> scored;
  double score = static_cast<double>(docids.size());
  for (const auto& docid : docids) {
    scored.emplace_back(docid, score--);
  }
  return make_ranked_list("q", std::move(scored));
}

// Scores fixed per docid.
class TableScorer : public RerankScorer {
 public:
  explicit TableScorer(std::map<std::string, double> table)
      : table_(std::move(table)) {}
  std::vector<double> score_batch(const std::string&,
                                  std::span<const Passage> passages) override {
    std::vector<double> scores;
    for (const auto& passage : passages) {
      scores.push_back(table_.at(passage.docid));
    }
    return scores;
  }

 private:
  std::map<std::string, double> table_;
};

class FailingScorer : public RerankScorer {
 public:
  std::vector<double> score_batch(const std::string&,
                                  std::span<const Passage>) override {
    ++calls;
    throw EndpointError("scorer down");
  }
  int calls = 0;
};

}  // namespace

TEST_CASE("a no-op scorer keeps the input order") {
  const Corpus corpus = corpus_of({{"a", "x"}, {"b", "y"}, {"c", "z"}});
  const RankedList input = list_of({"b", "a", "c"});
  NoopRerankScorer noop;
  const RerankResult result = rerank("q", input, corpus, noop, 10);
  CHECK_FALSE(result.degraded);
  REQUIRE(result.list.entries.size() == 3);
  CHECK(result.list.entries[0].docid == "b");
  CHECK(result.list.entries[1].docid == "a");
  CHECK(result.list.entries[2].docid == "c");
}

TEST_CASE("scorer scores reorder the list and replace the old scores") {
  const Corpus corpus = corpus_of({{"doc1", ""}, {"doc2", ""}, {"doc3", ""}});
  const RankedList input = list_of({"doc1", "doc2", "doc3"});
  TableScorer scorer({{"doc1", 0.1}, {"doc2", 0.9}, {"doc3", 0.5}});
  const RerankResult result = rerank("q", input, corpus, scorer, 10);
  REQUIRE(result.list.entries.size() == 3);
  CHECK(result.list.entries[0].docid == "doc2");
  CHECK(result.list.entries[1].docid == "doc3");
  CHECK(result.list.entries[2].docid == "doc1");
  CHECK(result.list.entries[0].score == doctest::Approx(0.9));
  CHECK(result.list.entries[0].rank == 1);
}

TEST_CASE("persistent scorer failure degrades to the original order") {
  const Corpus corpus = corpus_of({{"a", ""}, {"b", ""}});
  const RankedList input = list_of({"a", "b"});
  FailingScorer scorer;
  const RerankResult result = rerank("q", input, corpus, scorer, 10, 2);
  CHECK(result.degraded);
  CHECK(scorer.calls == 3);  // initial try plus two retries
  REQUIRE(result.list.entries.size() == 2);
  CHECK(result.list.entries[0].docid == "a");
  CHECK(result.list.entries[1].docid == "b");
}

TEST_CASE("equal scores keep the original relative order") {
  const Corpus corpus = corpus_of({{"a", ""}, {"b", ""}, {"c", ""}});
  const RankedList input = list_of({"c", "a", "b"});
  TableScorer scorer({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}});
  const RerankResult result = rerank("q", input, corpus, scorer, 10);
  CHECK(result.list.entries[0].docid == "c");
  CHECK(result.list.entries[1].docid == "a");
  CHECK(result.list.entries[2].docid == "b");
}

TEST_CASE("rerank truncates to top_n and keeps a docid subset") {
  const Corpus corpus = corpus_of({{"a", ""}, {"b", ""}, {"c", ""}});
  const RankedList input = list_of({"a", "b", "c"});
  TableScorer scorer({{"a", 0.2}, {"b", 0.8}, {"c", 0.4}});
  const RerankResult result = rerank("q", input, corpus, scorer, 2);
  REQUIRE(result.list.entries.size() == 2);
  CHECK(result.list.entries[0].docid == "b");
  CHECK(result.list.entries[1].docid == "c");
}

TEST_CASE("a docid missing from the corpus is a hard error") {
  const Corpus corpus = corpus_of({{"a", ""}});
  const RankedList input = list_of({"a", "ghost"});
  NoopRerankScorer noop;
  CHECK_THROWS_WITH_AS(rerank("q", input, corpus, noop, 10),
                       doctest::Contains("ghost"), ValidationError);
}

TEST_CASE("rerank of an empty list is empty") {
  const Corpus corpus = corpus_of({});
  RankedList empty;
  empty.query_id = "q";
  NoopRerankScorer noop;
  const RerankResult result = rerank("q", empty, corpus, noop, 10);
  CHECK(result.list.entries.empty());
  CHECK_FALSE(result.degraded);
}

TEST_CASE("lexical overlap F1") {
  CHECK(lexical_overlap_f1("same words here", "same words here") ==
        doctest::Approx(1.0));
  CHECK(lexical_overlap_f1("alpha beta", "gamma delta") == 0.0);
  // query [a,b], passage [b,c]: precision 0.5, recall 0.5, F1 0.5.
  CHECK(lexical_overlap_f1("a b", "b c") == doctest::Approx(0.5));
  CHECK(lexical_overlap_f1("", "anything") == 0.0);
  // Multiset semantics: repeated tokens only match as often as they occur.
  CHECK(lexical_overlap_f1("a a", "a b") ==
        doctest::Approx(2.0 * 0.5 * 0.5 / (0.5 + 0.5)));
}
