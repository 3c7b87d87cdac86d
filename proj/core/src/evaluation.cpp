#include "convsearch/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "convsearch/corpus_io.hpp"

namespace convsearch {

namespace {

double gain_of(int grade, GainVariant gain) {
  if (gain == GainVariant::linear) {
    return static_cast<double>(grade);
  }
  return std::exp2(static_cast<double>(grade)) - 1.0;
}

double discount(std::size_t rank) {
  return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

}  // namespace

double ndcg_at_k(const RankedList& list, const QrelSet& qrels, std::size_t k,
                 GainVariant gain) {
  const auto* judged = qrels.judgments(list.query_id);
  if (judged == nullptr || judged->empty()) {
    return 0.0;
  }

  std::vector<int> grades;
  grades.reserve(judged->size());
  for (const auto& [docid, grade] : *judged) {
    grades.push_back(grade);
  }
  std::sort(grades.begin(), grades.end(), std::greater<int>());

  double ideal = 0.0;
  for (std::size_t i = 0; i < grades.size() && i < k; ++i) {
    ideal += gain_of(grades[i], gain) * discount(i + 1);
  }
  if (ideal <= 0.0) {
    return 0.0;
  }

  double dcg = 0.0;
  for (const RankedEntry& entry : list.entries) {
    if (entry.rank > k) {
      break;
    }
    dcg += gain_of(qrels.grade(list.query_id, entry.docid), gain) *
           discount(entry.rank);
  }
  return dcg / ideal;
}

double mrr_at_k(const RankedList& list, const QrelSet& qrels, std::size_t k) {
  for (const RankedEntry& entry : list.entries) {
    if (entry.rank > k) {
      break;
    }
    if (qrels.grade(list.query_id, entry.docid) >= 1) {
      return 1.0 / static_cast<double>(entry.rank);
    }
  }
  return 0.0;
}

MetricReport evaluate(const std::vector<RankedList>& lists, const QrelSet& qrels,
                      std::size_t ndcg_k, std::size_t mrr_k, GainVariant gain) {
  MetricReport report;
  report.ndcg_k = ndcg_k;
  report.mrr_k = mrr_k;
  double ndcg_sum = 0.0;
  double mrr_sum = 0.0;
  for (const RankedList& list : lists) {
    if (!qrels.any_relevant(list.query_id)) {
      report.unjudged.push_back(list.query_id);
      continue;
    }
    QueryMetrics metrics;
    metrics.ndcg = ndcg_at_k(list, qrels, ndcg_k, gain);
    metrics.mrr = mrr_at_k(list, qrels, mrr_k);
    ndcg_sum += metrics.ndcg;
    mrr_sum += metrics.mrr;
    report.per_query.emplace(list.query_id, metrics);
  }
  if (!report.per_query.empty()) {
    report.defined = true;
    report.mean_ndcg = ndcg_sum / static_cast<double>(report.per_query.size());
    report.mean_mrr = mrr_sum / static_cast<double>(report.per_query.size());
  }
  return report;
}

MetricReport evaluate_run(const std::string& run_path,
                          const std::string& qrels_path, std::size_t ndcg_k,
                          std::size_t mrr_k, GainVariant gain) {
  const auto lists = read_run(run_path);
  const auto qrels = read_qrels(qrels_path);
  return evaluate(lists, qrels, ndcg_k, mrr_k, gain);
}

std::string format_metric_table(const MetricReport& report) {
  std::ostringstream out;
  char row[128];
  std::snprintf(row, sizeof(row), "%-24s %12s %12s\n", "query",
                ("nDCG@" + std::to_string(report.ndcg_k)).c_str(),
                ("MRR@" + std::to_string(report.mrr_k)).c_str());
  out << row << std::string(50, '-') << '\n';
  for (const auto& [qid, metrics] : report.per_query) {
    std::snprintf(row, sizeof(row), "%-24s %12.4f %12.4f\n", qid.c_str(),
                  metrics.ndcg, metrics.mrr);
    out << row;
  }
  out << std::string(50, '-') << '\n';
  if (report.defined) {
    std::snprintf(row, sizeof(row), "%-24s %12.4f %12.4f\n",
                  ("mean (" + std::to_string(report.judged_count()) + " judged)").c_str(),
                  report.mean_ndcg, report.mean_mrr);
    out << row;
  } else {
    out << "mean: undefined (no judged queries)\n";
  }
  if (!report.unjudged.empty()) {
    out << "unjudged queries: " << report.unjudged.size() << '\n';
  }
  return out.str();
}

std::string metric_report_json(const MetricReport& report) {
  nlohmann::json j;
  j["ndcg_k"] = report.ndcg_k;
  j["mrr_k"] = report.mrr_k;
  j["defined"] = report.defined;
  j["judged"] = report.judged_count();
  j["unjudged"] = report.unjudged;
  if (report.defined) {
    j["mean"] = {{"ndcg", report.mean_ndcg}, {"mrr", report.mean_mrr}};
  }
  auto& per_query = j["per_query"] = nlohmann::json::object();
  for (const auto& [qid, metrics] : report.per_query) {
    per_query[qid] = {{"ndcg", metrics.ndcg}, {"mrr", metrics.mrr}};
  }
  return j.dump(2);
}

}  // namespace convsearch
