#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "convsearch/endpoints.hpp"
#include "convsearch/types.hpp"

namespace convsearch {

struct RerankResult {
  RankedList list;
  bool degraded = false;  // scorer failed persistently; original order kept
};

// Rescores the list with the given scorer and reorders by the new scores,
// truncated to top_n. Original retrieval scores are discarded; equal scores
// keep their original relative order. Passage text is resolved from the
// corpus by docid; a missing docid is a hard error (corrupt run).
// A scorer failure is retried up to retry_limit times; persistent failure
// returns the original ordering with the degraded flag set.
RerankResult rerank(std::string_view query, const RankedList& list,
                    const Corpus& corpus, RerankScorer& scorer,
                    std::size_t top_n, int retry_limit = 1);

// Token-overlap F1 between the query and passage token multisets.
double lexical_overlap_f1(std::string_view query, std::string_view passage_text);

}  // namespace convsearch
