#pragma once

#include <cstddef>
#include <span>

#include "convsearch/types.hpp"

namespace convsearch {

struct RrfConfig {
  double k = 60.0;            // rank offset constant
  std::size_t depth = 1000;   // output truncation

  void validate() const;  // k > 0, depth >= 1
};

// Reciprocal Rank Fusion: score(d) = sum over lists containing d of
// 1/(k + rank(d)). Entries are sorted by fused score descending, ties by
// ascending docid, truncated to config.depth, ranks reassigned from 1.
// All input lists must share one query_id and at least one list is required.
RankedList rrf_fuse(std::span<const RankedList> lists, const RrfConfig& config = {});

}  // namespace convsearch
