#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "convsearch/endpoints.hpp"

namespace convsearch {

// Stable 64-bit FNV-1a; used wherever mock behavior must not depend on the
// standard library's std::hash.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull);

// Deterministic stand-in for an LLM endpoint. Dispatches on the prompt's
// "### task:" line and reads the bracketed sections; full contract in
// docs/formats.md. Identical (seed, prompt, n, temperature) always yields
// identical texts. Stateless and thread-safe.
//
//   rewrite      candidate 0 is the question verbatim; candidate i appends i
//                context tokens, rotated by the seed, strided by
//                max(1, lround(temperature)).
//   enhance X    appends an "(X: ...)" note to the history; HS instead
//                collapses the history to its first and last lines.
//   summarize    "Summary: " + the first distinct tokens of the passages.
//   respond      one-sentence answer citing passage count and key terms.
//   ptkb_update  sentences of the question containing "i"/"my"/"me" that are
//                not already statements, one per line, else "none".
//   ptkb_select  comma-separated ids of statements sharing a content token
//                (>= 3 chars) with the question, else "none".
class MockTextGenerator : public TextGenerator {
 public:
  explicit MockTextGenerator(std::uint64_t seed = 0) : seed_(seed) {}
  std::vector<std::string> generate(const std::string& prompt, std::size_t n,
                                    double temperature) override;

 private:
  std::uint64_t seed_;
};

// Token-overlap F1 reranker (the deterministic cross-encoder stand-in).
class LexicalRerankScorer : public RerankScorer {
 public:
  std::vector<double> score_batch(const std::string& query,
                                  std::span<const Passage> passages) override;
};

// Scores by descending input position, so reordering by these scores
// reproduces the input order exactly. Control arm for ordering experiments.
class NoopRerankScorer : public RerankScorer {
 public:
  std::vector<double> score_batch(const std::string& query,
                                  std::span<const Passage> passages) override;
};

}  // namespace convsearch
