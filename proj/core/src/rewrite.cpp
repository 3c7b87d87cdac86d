#include "convsearch/rewrite.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <unordered_set>

#include "convsearch/errors.hpp"

namespace convsearch {

namespace {

std::vector<RewriteStrategy> make_registry() {
  using S = EnhanceStep;
  std::vector<RewriteStrategy> registry;
  registry.push_back({"llm4cs", prompts::rewrite_template("llm4cs"), {S::PR}});
  registry.push_back({"llm4cs_no_pr", prompts::rewrite_template("llm4cs_no_pr"), {}});
  registry.push_back({"chiq_ad", prompts::rewrite_template("chiq_ad"),
                      {S::TS, S::QD, S::RE, S::PR, S::HS}});
  registry.push_back({"chiq_ad_no_hs", prompts::rewrite_template("chiq_ad_no_hs"),
                      {S::TS, S::QD, S::RE, S::PR}});
  registry.push_back({"passthrough", "", {}});
  return registry;
}

const std::vector<RewriteStrategy>& registry() {
  static const std::vector<RewriteStrategy> strategies = make_registry();
  return strategies;
}

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings != nullptr) {
    warnings->push_back(std::move(message));
  }
}

std::string trimmed(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return std::string(text.substr(begin, end - begin));
}

}  // namespace

const RewriteStrategy& strategy_by_name(std::string_view name) {
  for (const RewriteStrategy& strategy : registry()) {
    if (strategy.name == name) {
      return strategy;
    }
  }
  throw ValidationError("unknown rewrite strategy \"" + std::string(name) + "\"");
}

std::vector<std::string> strategy_names() {
  std::vector<std::string> names;
  for (const RewriteStrategy& strategy : registry()) {
    names.push_back(strategy.name);
  }
  return names;
}

std::string enhance_history(const DialogueState& state,
                            std::span<const EnhanceStep> steps,
                            TextGenerator& generator, double temperature,
                            std::vector<std::string>* warnings) {
  std::string enhanced = prompts::serialize_history(state.history);
  for (EnhanceStep step : steps) {
    const std::string prompt =
        prompts::fill(prompts::step_template(step),
                      {{"history", enhanced}, {"utterance", state.current.utterance}});
    try {
      auto texts = generator.generate(prompt, 1, temperature);
      if (texts.empty() || trimmed(texts.front()).empty()) {
        throw EndpointError("empty enhancement output");
      }
      enhanced = texts.front();
    } catch (const Error& e) {
      warn(warnings, "enhancement step " +
                         std::string(enhance_step_name(step)) + " skipped: " +
                         e.what());
    }
  }
  return enhanced;
}

CandidateSet generate_candidates(const DialogueState& state,
                                 const RewriteStrategy& strategy, std::size_t n,
                                 TextGenerator& generator, double temperature,
                                 std::vector<std::string>* warnings) {
  if (n < 1) {
    throw ValidationError("n_candidates must be >= 1");
  }
  CandidateSet set;
  set.n_target = n;

  const std::string passthrough = trimmed(state.current.utterance);
  if (strategy.name == "passthrough") {
    set.candidates.push_back({passthrough, strategy.name, std::nullopt, 0});
    return set;
  }

  std::vector<std::string> texts;
  try {
    const std::string enhanced =
        enhance_history(state, strategy.steps, generator, temperature, warnings);
    const std::string prompt = prompts::fill(
        strategy.prompt_template,
        {{"ptkb", prompts::serialize_ptkb(state.ptkb)},
         {"history", enhanced},
         {"utterance", state.current.utterance}});
    texts = generator.generate(prompt, n, temperature);
  } catch (const Error& e) {
    warn(warnings, "candidate generation failed for " + strategy.name + ": " +
                       e.what());
  }

  std::unordered_set<std::string> seen;
  std::size_t index = 0;
  for (const std::string& raw : texts) {
    if (index >= n) {
      break;
    }
    const std::string text = trimmed(raw);
    ++index;
    if (text.empty() || !seen.insert(text).second) {
      continue;
    }
    set.candidates.push_back({text, strategy.name, std::nullopt, index - 1});
  }
  if (set.candidates.empty()) {
    warn(warnings, "no usable candidates from " + strategy.name +
                       ", falling back to passthrough");
    set.candidates.push_back({passthrough, "passthrough", std::nullopt, 0});
  }
  return set;
}

RewriteCandidate best_of_n(CandidateSet& set, const DialogueState& state,
                           RewardScorer& scorer,
                           std::vector<std::string>* warnings) {
  if (set.candidates.empty()) {
    throw ValidationError("best_of_n on an empty candidate set");
  }
  bool any_scored = false;
  for (RewriteCandidate& candidate : set.candidates) {
    try {
      candidate.reward = scorer.score(candidate.text, state);
      any_scored = true;
    } catch (const Error& e) {
      candidate.reward = -std::numeric_limits<double>::infinity();
      warn(warnings, "reward scoring failed for candidate " +
                         std::to_string(candidate.generation_index) + ": " +
                         e.what());
    }
  }
  if (!any_scored) {
    warn(warnings, "reward scoring failed for every candidate, keeping the first");
    return set.candidates.front();
  }

  const RewriteCandidate* best = &set.candidates.front();
  for (const RewriteCandidate& candidate : set.candidates) {
    const double reward = candidate.reward.value();
    if (reward > best->reward.value() ||
        (reward == best->reward.value() &&
         candidate.generation_index < best->generation_index)) {
      best = &candidate;
    }
  }
  return *best;
}

LexicalRewardScorer::LexicalRewardScorer(const InvertedIndex& index,
                                         const QrelSet* qrels, std::size_t depth)
    : index_(index), qrels_(qrels), depth_(depth) {}

double LexicalRewardScorer::score(const std::string& query,
                                  const DialogueState& state) {
  if (qrels_ == nullptr) {
    const RankedList top = retrieve(index_, query, 1);
    return top.entries.empty() ? 0.0 : top.entries.front().score;
  }
  const std::string qid = query_id(state);
  const RankedList top = retrieve(index_, query, depth_);
  for (const RankedEntry& entry : top.entries) {
    if (qrels_->grade(qid, entry.docid) >= 1) {
      return 1.0 / static_cast<double>(entry.rank);
    }
  }
  return 0.0;
}

}  // namespace convsearch
