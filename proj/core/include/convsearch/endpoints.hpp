#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "convsearch/types.hpp"

namespace convsearch {

// Text-generation endpoint configuration. Wire contract:
//   POST {base_url}/generate  {"prompt": str, "n": int, "temperature": real}
//   -> {"texts": [str]}
struct GenEndpoint {
  std::string base_url;
  double timeout_s = 30.0;
  double temperature = 1.0;
  int max_retries = 2;

  void validate() const;  // timeout > 0
};

// Reward endpoint. Wire contract:
//   POST {base_url}/reward  {"query": str, "history": [str], "ptkb": [str]}
//   -> {"score": real}
struct RewardEndpoint {
  std::string base_url;
  double timeout_s = 10.0;
  int max_retries = 1;
};

// Rerank endpoint. Wire contract:
//   POST {base_url}/rerank  {"query": str, "passages": [{"docid", "text"}]}
//   -> {"scores": [real]}  aligned to input order
struct RerankEndpoint {
  std::string base_url;
  std::size_t batch_size = 32;
  double timeout_s = 30.0;
  int max_retries = 1;
};

// Interface over the generation endpoint. Implementations must be safe to
// call from multiple threads.
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  // Returns up to n texts. Throws EndpointError when the call cannot be
  // served; callers decide how to degrade.
  virtual std::vector<std::string> generate(const std::string& prompt,
                                            std::size_t n, double temperature) = 0;
};

// Scores one rewrite candidate against the dialogue context.
class RewardScorer {
 public:
  virtual ~RewardScorer() = default;
  virtual double score(const std::string& query, const DialogueState& state) = 0;
};

// Scores (query, passage) pairs; result is aligned to the input order.
class RerankScorer {
 public:
  virtual ~RerankScorer() = default;
  virtual std::vector<double> score_batch(const std::string& query,
                                          std::span<const Passage> passages) = 0;
};

}  // namespace convsearch
