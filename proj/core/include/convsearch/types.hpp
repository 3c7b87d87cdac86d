#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace convsearch {

struct Passage {
  std::string docid;
  std::string text;
};

// Ordered passage collection with token-level length statistics.
// avg_doc_len() is the mean token count as produced by tokenize().
class Corpus {
 public:
  // Throws ValidationError on empty or duplicate docid.
  void add(Passage passage);

  const std::vector<Passage>& passages() const { return passages_; }
  std::size_t doc_count() const { return passages_.size(); }
  double avg_doc_len() const;

  const Passage* find(std::string_view docid) const;
  std::optional<std::uint32_t> ordinal(std::string_view docid) const;

 private:
  std::vector<Passage> passages_;
  std::unordered_map<std::string, std::uint32_t> by_id_;
  std::uint64_t total_tokens_ = 0;
};

struct PtkbStatement {
  std::string id;
  std::string text;
  bool relevant = false;  // per-turn provenance flag
};

struct DialogueTurn {
  std::string turn_id;
  std::string utterance;
  std::optional<std::string> response;
};

// One dialogue as stored on disk: PTKB plus the full turn list.
struct Dialogue {
  std::string dialogue_id;
  std::vector<PtkbStatement> ptkb;
  std::vector<DialogueTurn> turns;
};

// The per-turn pipeline input: completed history, the user's personal
// knowledge base, and the utterance awaiting a response.
struct DialogueState {
  std::string dialogue_id;
  std::vector<DialogueTurn> history;  // every turn has a response
  std::vector<PtkbStatement> ptkb;
  DialogueTurn current;  // response not yet generated
};

// "<dialogue_id>_<turn_id>", the key used in run files and qrels.
std::string query_id(const DialogueState& state);

struct RankedEntry {
  std::string docid;
  double score = 0.0;
  std::uint32_t rank = 0;  // 1-based
};

// Ordered retrieval result. Ranks are contiguous from 1, scores are
// non-increasing, docids unique.
struct RankedList {
  std::string query_id;
  std::vector<RankedEntry> entries;

  // Throws ValidationError if the invariants above do not hold.
  void validate() const;
};

// Builds a RankedList from (docid, score) pairs already sorted by
// descending score; assigns contiguous ranks.
RankedList make_ranked_list(std::string query_id,
                            std::vector<std::pair<std::string, double>> scored);

// Graded relevance judgments keyed by (query_id, docid).
class QrelSet {
 public:
  void set(const std::string& query_id, const std::string& docid, int grade);

  // 0 for unjudged pairs (standard TREC convention).
  int grade(const std::string& query_id, const std::string& docid) const;
  bool has_query(const std::string& query_id) const;
  bool any_relevant(const std::string& query_id) const;  // some grade >= 1
  const std::map<std::string, int>* judgments(const std::string& query_id) const;
  std::size_t query_count() const { return by_query_.size(); }
  const std::map<std::string, std::map<std::string, int>>& all() const {
    return by_query_;
  }

 private:
  std::map<std::string, std::map<std::string, int>> by_query_;
};

}  // namespace convsearch
