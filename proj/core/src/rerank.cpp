#include "convsearch/rerank.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "convsearch/errors.hpp"
#include "convsearch/tokenizer.hpp"

namespace convsearch {

RerankResult rerank(std::string_view query, const RankedList& list,
                    const Corpus& corpus, RerankScorer& scorer,
                    std::size_t top_n, int retry_limit) {
  if (top_n < 1) {
    throw ValidationError("rerank top_n must be >= 1");
  }
  RerankResult result;
  result.list.query_id = list.query_id;
  if (list.entries.empty()) {
    return result;
  }

  std::vector<Passage> passages;
  passages.reserve(list.entries.size());
  for (const RankedEntry& entry : list.entries) {
    const Passage* passage = corpus.find(entry.docid);
    if (passage == nullptr) {
      throw ValidationError("rerank: docid \"" + entry.docid +
                            "\" not in corpus (corrupt run)");
    }
    passages.push_back(*passage);
  }

  std::vector<double> scores;
  bool scored = false;
  for (int attempt = 0; attempt <= retry_limit && !scored; ++attempt) {
    try {
      scores = scorer.score_batch(std::string(query), passages);
      if (scores.size() != passages.size()) {
        throw EndpointError("rerank scorer returned " +
                            std::to_string(scores.size()) + " scores for " +
                            std::to_string(passages.size()) + " passages");
      }
      scored = true;
    } catch (const Error&) {
      if (attempt == retry_limit) {
        break;
      }
    }
  }

  if (!scored) {
    // Persistent scorer failure: keep the original ordering.
    result.degraded = true;
    result.list = list;
    if (result.list.entries.size() > top_n) {
      result.list.entries.resize(top_n);
    }
    return result;
  }

  std::vector<std::size_t> order(list.entries.size());
  std::iota(order.begin(), order.end(), 0);
  // Stable: equal scores keep the original rank order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<std::pair<std::string, double>> reordered;
  reordered.reserve(std::min(top_n, order.size()));
  for (std::size_t i = 0; i < order.size() && i < top_n; ++i) {
    reordered.emplace_back(list.entries[order[i]].docid, scores[order[i]]);
  }
  result.list = make_ranked_list(list.query_id, std::move(reordered));
  return result;
}

double lexical_overlap_f1(std::string_view query, std::string_view passage_text) {
  const auto query_tokens = tokenize(query);
  const auto passage_tokens = tokenize(passage_text);
  if (query_tokens.empty() || passage_tokens.empty()) {
    return 0.0;
  }

  std::map<std::string, std::size_t> query_counts;
  for (const auto& token : query_tokens) {
    ++query_counts[token];
  }
  std::size_t overlap = 0;
  std::map<std::string, std::size_t> seen;
  for (const auto& token : passage_tokens) {
    auto it = query_counts.find(token);
    if (it != query_counts.end() && seen[token] < it->second) {
      ++seen[token];
      ++overlap;
    }
  }
  if (overlap == 0) {
    return 0.0;
  }
  const double precision = static_cast<double>(overlap) / query_tokens.size();
  const double recall = static_cast<double>(overlap) / passage_tokens.size();
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace convsearch
