#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convsearch/endpoints.hpp"
#include "convsearch/inverted_index.hpp"
#include "convsearch/prompts.hpp"
#include "convsearch/types.hpp"

namespace convsearch {

// A named rewriting recipe: which history-enhancement steps run before the
// rewrite call and which rewrite prompt is used.
struct RewriteStrategy {
  std::string name;
  std::string prompt_template;      // placeholders for {{ptkb}}, {{history}}, {{utterance}}
  std::vector<EnhanceStep> steps;   // applied in order by enhance_history
};

// Registry: llm4cs, llm4cs_no_pr, chiq_ad, chiq_ad_no_hs, passthrough.
// llm4cs runs the pseudo-response step, the chiq variants run the full
// enhancement chain (minus HS for chiq_ad_no_hs), passthrough returns the
// utterance verbatim. Throws ValidationError for unknown names.
const RewriteStrategy& strategy_by_name(std::string_view name);
std::vector<std::string> strategy_names();

struct RewriteCandidate {
  std::string text;
  std::string strategy;
  std::optional<double> reward;
  std::size_t generation_index = 0;
};

struct CandidateSet {
  std::vector<RewriteCandidate> candidates;
  std::size_t n_target = 1;
};

// Applies the enhancement steps in order, one generation call per step, each
// fed the previous step's output. A failed step is skipped with a warning.
// With no steps, returns the verbatim serialized history.
std::string enhance_history(const DialogueState& state,
                            std::span<const EnhanceStep> steps,
                            TextGenerator& generator, double temperature = 1.0,
                            std::vector<std::string>* warnings = nullptr);

// Generates up to n candidates with one call requesting n samples. Blank and
// duplicate texts are dropped. If generation fails entirely, the set degrades
// to the passthrough candidate (the utterance itself) — never empty.
CandidateSet generate_candidates(const DialogueState& state,
                                 const RewriteStrategy& strategy, std::size_t n,
                                 TextGenerator& generator, double temperature = 1.0,
                                 std::vector<std::string>* warnings = nullptr);

// Best-of-N selection: scores every candidate (rewards stored back into the
// set) and returns the argmax; ties break toward the lowest generation_index.
// A candidate whose scoring fails gets -inf; if every score fails, the first
// candidate is returned with a warning.
RewriteCandidate best_of_n(CandidateSet& set, const DialogueState& state,
                           RewardScorer& scorer,
                           std::vector<std::string>* warnings = nullptr);

// Deterministic retrieval-signal reward: without qrels, the BM25 score of
// the candidate's top-1 document (0 if nothing matches); with qrels, the
// reciprocal rank of the first judged-relevant document in the candidate's
// top-`depth` retrieval for query_id(state).
class LexicalRewardScorer : public RewardScorer {
 public:
  explicit LexicalRewardScorer(const InvertedIndex& index,
                               const QrelSet* qrels = nullptr,
                               std::size_t depth = 100);
  double score(const std::string& query, const DialogueState& state) override;

 private:
  const InvertedIndex& index_;
  const QrelSet* qrels_;
  std::size_t depth_;
};

}  // namespace convsearch
