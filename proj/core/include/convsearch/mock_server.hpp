#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "convsearch/types.hpp"

namespace convsearch {

// Deterministic HTTP test double serving every endpoint contract on one
// base URL: POST /generate, /reward, /rerank plus the scripted-user routes
// GET /session/{id}/next and POST /session/{id}/response. /generate is the
// MockTextGenerator, /reward the lexical reward scorer over the given
// corpus, /rerank the token-overlap F1 scorer. Sessions replay the given
// dialogues; the first /next of a session carries its PTKB.
class MockServer {
 public:
  MockServer(Corpus corpus, std::uint64_t seed = 0,
             std::vector<Dialogue> sessions = {});
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Starts serving on a background thread; returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();

  // Responses posted to /session/{id}/response, in arrival order.
  std::vector<std::string> posted_responses(const std::string& session_id) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace convsearch
