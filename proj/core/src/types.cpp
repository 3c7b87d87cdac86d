#include "convsearch/types.hpp"

#include <algorithm>
#include <utility>

#include "convsearch/errors.hpp"
#include "convsearch/tokenizer.hpp"

namespace convsearch {

void Corpus::add(Passage passage) {
  if (passage.docid.empty()) {
    throw ValidationError("passage docid must be non-empty");
  }
  if (by_id_.contains(passage.docid)) {
    throw ValidationError("duplicate docid \"" + passage.docid + "\"");
  }
  total_tokens_ += tokenize(passage.text).size();
  by_id_.emplace(passage.docid, static_cast<std::uint32_t>(passages_.size()));
  passages_.push_back(std::move(passage));
}

double Corpus::avg_doc_len() const {
  if (passages_.empty()) {
    return 0.0;
  }
  return static_cast<double>(total_tokens_) / static_cast<double>(passages_.size());
}

const Passage* Corpus::find(std::string_view docid) const {
  auto it = by_id_.find(std::string(docid));
  return it == by_id_.end() ? nullptr : &passages_[it->second];
}

std::optional<std::uint32_t> Corpus::ordinal(std::string_view docid) const {
  auto it = by_id_.find(std::string(docid));
  if (it == by_id_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::string query_id(const DialogueState& state) {
  return state.dialogue_id + "_" + state.current.turn_id;
}

void RankedList::validate() const {
  std::unordered_map<std::string, bool> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const RankedEntry& entry = entries[i];
    if (entry.rank != i + 1) {
      throw ValidationError("ranked list " + query_id + ": rank " +
                            std::to_string(entry.rank) + " at position " +
                            std::to_string(i + 1));
    }
    if (i > 0 && entries[i - 1].score < entry.score) {
      throw ValidationError("ranked list " + query_id +
                            ": scores increase at rank " + std::to_string(i + 1));
    }
    if (!seen.emplace(entry.docid, true).second) {
      throw ValidationError("ranked list " + query_id + ": duplicate docid \"" +
                            entry.docid + "\"");
    }
  }
}

RankedList make_ranked_list(std::string query_id,
                            std::vector<std::pair<std::string, double>> scored) {
  RankedList list;
  list.query_id = std::move(query_id);
  list.entries.reserve(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    list.entries.push_back({std::move(scored[i].first), scored[i].second,
                            static_cast<std::uint32_t>(i + 1)});
  }
  list.validate();
  return list;
}

void QrelSet::set(const std::string& query_id, const std::string& docid, int grade) {
  by_query_[query_id][docid] = grade;
}

int QrelSet::grade(const std::string& query_id, const std::string& docid) const {
  auto q = by_query_.find(query_id);
  if (q == by_query_.end()) {
    return 0;
  }
  auto d = q->second.find(docid);
  return d == q->second.end() ? 0 : d->second;
}

bool QrelSet::has_query(const std::string& query_id) const {
  return by_query_.contains(query_id);
}

bool QrelSet::any_relevant(const std::string& query_id) const {
  auto q = by_query_.find(query_id);
  if (q == by_query_.end()) {
    return false;
  }
  return std::any_of(q->second.begin(), q->second.end(),
                     [](const auto& kv) { return kv.second >= 1; });
}

const std::map<std::string, int>* QrelSet::judgments(const std::string& query_id) const {
  auto q = by_query_.find(query_id);
  return q == by_query_.end() ? nullptr : &q->second;
}

}  // namespace convsearch
