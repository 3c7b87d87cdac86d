#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "convsearch/evaluation.hpp"

using namespace convsearch;

namespace {

// Brute-force metrics straight from the definitions, independent of the
// implementation: gains via std::pow, ideal ranking via a full sort of the
// judged grades.
double oracle_ndcg(const std::vector<std::pair<std::string, int>>& run_grades,
                   const std::vector<int>& judged_grades, std::size_t k) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < run_grades.size() && i < k; ++i) {
    dcg += (std::pow(2.0, run_grades[i].second) - 1.0) /
           (std::log(static_cast<double>(i) + 2.0) / std::log(2.0));
  }
  std::vector<int> sorted = judged_grades;
  std::sort(sorted.rbegin(), sorted.rend());
  double idcg = 0.0;
  for (std::size_t i = 0; i < sorted.size() && i < k; ++i) {
    idcg += (std::pow(2.0, sorted[i]) - 1.0) /
            (std::log(static_cast<double>(i) + 2.0) / std::log(2.0));
  }
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

double oracle_mrr(const std::vector<std::pair<std::string, int>>& run_grades,
                  std::size_t k) {
  for (std::size_t i = 0; i < run_grades.size() && i < k; ++i) {
    if (run_grades[i].second >= 1) {
      return 1.0 / static_cast<double>(i + 1);
    }
  }
  return 0.0;
}

RankedList list_of(const std::string& qid, const std::vector<std::string>& docids) {
  std::vector<std::pair<std::string, double>> scored;
  double score = static_cast<double>(docids.size());
  for (const auto& docid : docids) {
    scored.emplace_back(docid, score--);
  }
  return make_ranked_list(qid, std::move(scored));
}

}  // namespace

TEST_CASE("ndcg is 1 for the ideal ranking") {
  QrelSet qrels;
  qrels.set("q", "a", 3);
  qrels.set("q", "b", 2);
  qrels.set("q", "c", 1);
  CHECK(ndcg_at_k(list_of("q", {"a", "b", "c"}), qrels, 10) ==
        doctest::Approx(1.0));
}

TEST_CASE("ndcg matches the worked three-grade example") {
  // Grades at ranks 1..3 are [0, 2, 1]; nDCG = 2.39279 / 3.63093 = 0.659002.
  QrelSet qrels;
  qrels.set("q", "r1", 0);
  qrels.set("q", "r2", 2);
  qrels.set("q", "r3", 1);
  const RankedList list = list_of("q", {"r1", "r2", "r3"});
  CHECK(ndcg_at_k(list, qrels, 10) == doctest::Approx(0.6590018048).epsilon(1e-4));
}

TEST_CASE("ndcg is 0 when nothing judged lands in the top k") {
  QrelSet qrels;
  qrels.set("q", "hidden", 3);
  CHECK(ndcg_at_k(list_of("q", {"a", "b"}), qrels, 10) == 0.0);
}

TEST_CASE("mrr reciprocal ranks") {
  QrelSet qrels;
  qrels.set("q", "rel", 1);
  CHECK(mrr_at_k(list_of("q", {"rel", "x"}), qrels, 10) == doctest::Approx(1.0));
  CHECK(mrr_at_k(list_of("q", {"x", "rel"}), qrels, 10) == doctest::Approx(0.5));
  // Relevant doc just past the cutoff.
  CHECK(mrr_at_k(list_of("q", {"a", "b", "rel"}), qrels, 2) == 0.0);
}

TEST_CASE("metrics match the brute-force oracle on random instances") {
  std::mt19937 gen(2024);
  for (int round = 0; round < 1000; ++round) {
    const std::size_t n_docs = 1 + gen() % 8;
    QrelSet qrels;
    std::vector<int> judged;
    std::vector<std::pair<std::string, int>> run_grades;
    std::vector<std::string> order;
    for (std::size_t d = 0; d < n_docs; ++d) {
      const std::string docid = "d" + std::to_string(d);
      const int grade = static_cast<int>(gen() % 4);
      // Judge ~75% of docs; unjudged ones count as grade 0 in the run.
      const bool judge = gen() % 4 != 0;
      if (judge) {
        qrels.set("q", docid, grade);
        judged.push_back(grade);
      }
      order.push_back(docid);
      run_grades.emplace_back(docid, judge ? grade : 0);
    }
    // Shuffle the run order deterministically.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = gen() % i;
      std::swap(order[i - 1], order[j]);
      std::swap(run_grades[i - 1], run_grades[j]);
    }
    const std::size_t k = 1 + gen() % 10;
    const RankedList list = list_of("q", order);

    const double expected_ndcg = oracle_ndcg(run_grades, judged, k);
    const double expected_mrr = oracle_mrr(run_grades, k);
    CHECK(std::abs(ndcg_at_k(list, qrels, k) - expected_ndcg) <= 1e-12);
    CHECK(std::abs(mrr_at_k(list, qrels, k) - expected_mrr) <= 1e-12);
  }
}

TEST_CASE("permuting docs below the cutoff changes nothing") {
  QrelSet qrels;
  qrels.set("q", "a", 2);
  qrels.set("q", "b", 1);
  qrels.set("q", "c", 3);
  const RankedList before = list_of("q", {"a", "b", "x", "y", "c"});
  const RankedList after = list_of("q", {"a", "b", "c", "y", "x"});
  CHECK(ndcg_at_k(before, qrels, 2) == doctest::Approx(ndcg_at_k(after, qrels, 2)));
  CHECK(mrr_at_k(before, qrels, 2) == doctest::Approx(mrr_at_k(after, qrels, 2)));
}

TEST_CASE("moving a higher grade upward never hurts ndcg") {
  QrelSet qrels;
  qrels.set("q", "hi", 3);
  qrels.set("q", "lo", 1);
  const double worse = ndcg_at_k(list_of("q", {"lo", "hi"}), qrels, 10);
  const double better = ndcg_at_k(list_of("q", {"hi", "lo"}), qrels, 10);
  CHECK(better >= worse);
}

TEST_CASE("metrics are rank-based: affine score changes are invisible") {
  QrelSet qrels;
  qrels.set("q", "a", 2);
  qrels.set("q", "b", 1);
  RankedList list = list_of("q", {"b", "a"});
  RankedList scaled = list;
  for (auto& entry : scaled.entries) {
    entry.score = entry.score * 7.5 + 3.0;
  }
  CHECK(ndcg_at_k(list, qrels, 10) == ndcg_at_k(scaled, qrels, 10));
  CHECK(mrr_at_k(list, qrels, 10) == mrr_at_k(scaled, qrels, 10));
}

TEST_CASE("linear gain variant differs from exponential") {
  QrelSet qrels;
  qrels.set("q", "a", 3);
  qrels.set("q", "b", 1);
  const RankedList list = list_of("q", {"b", "a"});
  CHECK(ndcg_at_k(list, qrels, 10, GainVariant::linear) !=
        doctest::Approx(ndcg_at_k(list, qrels, 10, GainVariant::exponential)));
}

TEST_CASE("evaluate aggregates judged queries and lists unjudged ones") {
  QrelSet qrels;
  qrels.set("q1", "a", 2);
  qrels.set("q2", "b", 1);
  qrels.set("q3", "c", 0);  // judged but nothing relevant
  const std::vector<RankedList> lists = {
      list_of("q1", {"a"}), list_of("q2", {"x", "b"}), list_of("q3", {"c"}),
      list_of("q4", {"z"})};
  const MetricReport report = evaluate(lists, qrels, 10, 1000);
  CHECK(report.defined);
  CHECK(report.judged_count() == 2);
  CHECK(report.unjudged == std::vector<std::string>{"q3", "q4"});
  CHECK(report.per_query.at("q1").ndcg == doctest::Approx(1.0));
  CHECK(report.per_query.at("q2").mrr == doctest::Approx(0.5));
  CHECK(report.mean_mrr == doctest::Approx((1.0 + 0.5) / 2.0));
}

TEST_CASE("evaluate_run reads files and handles an empty run") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto run_path = (dir / "convsearch_eval.run").string();
  const auto qrels_path = (dir / "convsearch_eval.qrels").string();
  {
    std::ofstream run(run_path);
    run << "q1 Q0 a 1 2.000000 t\nq1 Q0 b 2 1.000000 t\n";
    std::ofstream qrels(qrels_path);
    qrels << "q1 0 a 2\nq1 0 b 1\n";
  }
  const MetricReport report = evaluate_run(run_path, qrels_path);
  CHECK(report.defined);
  CHECK(report.mean_ndcg == doctest::Approx(1.0));
  CHECK(report.mean_mrr == doctest::Approx(1.0));

  {
    std::ofstream run(run_path, std::ios::trunc);
  }
  const MetricReport empty = evaluate_run(run_path, qrels_path);
  CHECK_FALSE(empty.defined);
  CHECK(empty.judged_count() == 0);

  const std::string table = format_metric_table(report);
  CHECK(table.find("nDCG@10") != std::string::npos);
  CHECK(table.find("MRR@1000") != std::string::npos);
  CHECK(table.find("mean") != std::string::npos);
  CHECK_FALSE(metric_report_json(report).empty());

  std::filesystem::remove(run_path);
  std::filesystem::remove(qrels_path);
}
