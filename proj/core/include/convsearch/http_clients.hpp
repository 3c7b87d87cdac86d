#pragma once

#include <optional>
#include <string>
#include <vector>

#include "convsearch/endpoints.hpp"
#include "convsearch/types.hpp"

namespace convsearch {

// HTTP implementations of the three service interfaces. Each call opens its
// own connection, so instances are safe to share across threads. Calls are
// retried per the endpoint's max_retries before EndpointError is thrown.

class HttpTextGenerator : public TextGenerator {
 public:
  explicit HttpTextGenerator(GenEndpoint endpoint);
  std::vector<std::string> generate(const std::string& prompt, std::size_t n,
                                    double temperature) override;

 private:
  GenEndpoint endpoint_;
};

class HttpRewardScorer : public RewardScorer {
 public:
  explicit HttpRewardScorer(RewardEndpoint endpoint);
  double score(const std::string& query, const DialogueState& state) override;

 private:
  RewardEndpoint endpoint_;
};

class HttpRerankScorer : public RerankScorer {
 public:
  explicit HttpRerankScorer(RerankEndpoint endpoint);
  // Scores in slices of endpoint.batch_size; any failed slice fails the call.
  std::vector<double> score_batch(const std::string& query,
                                  std::span<const Passage> passages) override;

 private:
  RerankEndpoint endpoint_;
};

// Client side of the simulated-user service.
//   GET  /session/{id}/next      -> {"turn_id", "utterance", "ptkb"?} or {"end": true}
//   POST /session/{id}/response  {"response", "passages", "ptkb", "rewrites"} -> 204
struct NextTurn {
  bool end = false;
  std::string turn_id;
  std::string utterance;
  std::vector<PtkbStatement> ptkb;  // statements introduced with this turn
};

struct SessionResponse {
  std::string response;
  std::vector<std::string> passages;  // top-10 docids
  std::vector<std::string> ptkb;      // provenance statement ids
  std::vector<std::string> rewrites;
};

class InteractiveClient {
 public:
  explicit InteractiveClient(std::string base_url, double timeout_s = 30.0);
  NextTurn next(const std::string& session_id);
  void post_response(const std::string& session_id, const SessionResponse& body);

 private:
  std::string base_url_;
  double timeout_s_;
};

}  // namespace convsearch
