#include "convsearch/fusion.hpp"

#include <algorithm>
#include <map>

#include "convsearch/errors.hpp"

namespace convsearch {

void RrfConfig::validate() const {
  if (k <= 0.0) {
    throw ValidationError("RRF k must be > 0");
  }
  if (depth < 1) {
    throw ValidationError("RRF depth must be >= 1");
  }
}

RankedList rrf_fuse(std::span<const RankedList> lists, const RrfConfig& config) {
  config.validate();
  if (lists.empty()) {
    throw ValidationError("RRF needs at least one input list");
  }
  const std::string& qid = lists.front().query_id;
  for (const RankedList& list : lists) {
    if (list.query_id != qid) {
      throw ValidationError("RRF query_id mismatch: \"" + qid + "\" vs \"" +
                            list.query_id + "\"");
    }
  }

  std::map<std::string, std::vector<double>> contributions;
  for (const RankedList& list : lists) {
    for (const RankedEntry& entry : list.entries) {
      contributions[entry.docid].push_back(
          1.0 / (config.k + static_cast<double>(entry.rank)));
    }
  }

  // Summing each doc's contributions in ascending order makes the fused
  // score exactly invariant under any permutation of the input lists.
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(contributions.size());
  for (auto& [docid, parts] : contributions) {
    std::sort(parts.begin(), parts.end());
    double score = 0.0;
    for (double part : parts) {
      score += part;
    }
    scored.emplace_back(docid, score);
  }
  // Map order is already ascending docid, so a stable sort on score keeps
  // the docid tie rule.
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (scored.size() > config.depth) {
    scored.resize(config.depth);
  }
  return make_ranked_list(qid, std::move(scored));
}

}  // namespace convsearch
