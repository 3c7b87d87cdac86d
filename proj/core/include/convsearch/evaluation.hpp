#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "convsearch/types.hpp"

namespace convsearch {

// Gain applied to a relevance grade g: exponential is 2^g - 1
// (trec_eval-compatible), linear is g.
enum class GainVariant { exponential, linear };

// nDCG@k with 1/log2(rank+1) discount. The ideal DCG is computed over all
// judged documents for the query, not only retrieved ones. Returns 0 when
// the query has no judged-relevant document.
double ndcg_at_k(const RankedList& list, const QrelSet& qrels, std::size_t k,
                 GainVariant gain = GainVariant::exponential);

// 1/rank of the first document with grade >= 1 within the top k, else 0.
double mrr_at_k(const RankedList& list, const QrelSet& qrels, std::size_t k);

struct QueryMetrics {
  double ndcg = 0.0;
  double mrr = 0.0;
};

struct MetricReport {
  std::size_t ndcg_k = 10;
  std::size_t mrr_k = 1000;
  // Queries with at least one relevant judgment.
  std::map<std::string, QueryMetrics> per_query;
  // Queries present in the run with no relevant judgment; excluded from means.
  std::vector<std::string> unjudged;
  double mean_ndcg = 0.0;
  double mean_mrr = 0.0;
  bool defined = false;  // false when no query was judged

  std::size_t judged_count() const { return per_query.size(); }
};

MetricReport evaluate(const std::vector<RankedList>& lists, const QrelSet& qrels,
                      std::size_t ndcg_k = 10, std::size_t mrr_k = 1000,
                      GainVariant gain = GainVariant::exponential);

MetricReport evaluate_run(const std::string& run_path,
                          const std::string& qrels_path,
                          std::size_t ndcg_k = 10, std::size_t mrr_k = 1000,
                          GainVariant gain = GainVariant::exponential);

// Fixed-width table with one row per judged query plus the mean row.
std::string format_metric_table(const MetricReport& report);

std::string metric_report_json(const MetricReport& report);

}  // namespace convsearch
