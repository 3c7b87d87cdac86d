#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "convsearch/types.hpp"

namespace convsearch {

// JSONL corpus: one {"docid": "...", "text": "..."} object per line.
// Throws ParseError with the line number on malformed lines or duplicates.
Corpus load_corpus(const std::string& path);
Corpus read_corpus(std::istream& in, const std::string& name);

// Dialogue file schema (documented in docs/formats.md):
//   {"dialogues": [{"dialogue_id": "...",
//                   "ptkb":  [{"id": "...", "text": "..."}],
//                   "turns": [{"turn_id": "...", "utterance": "...",
//                              "response": "..."}]}]}
// "ptkb" and per-turn "response" are optional; "turn_id"/"id" default to the
// 1-based position. Dialogues with an empty turn list are skipped with a
// warning.
std::vector<Dialogue> load_dialogue_file(const std::string& path,
                                         std::vector<std::string>* warnings = nullptr);

// One DialogueState per turn position; history holds the preceding turns.
std::vector<DialogueState> explode_dialogue(const Dialogue& dialogue);
std::vector<DialogueState> load_dialogues(const std::string& path,
                                          std::vector<std::string>* warnings = nullptr);

// Standard 6-column TREC run lines: "query_id Q0 docid rank score tag",
// space separated, scores with 6 decimals, grouped by query in list order.
// The tag must be non-empty and contain no whitespace.
void write_run(const std::vector<RankedList>& lists, const std::string& tag,
               const std::string& path);
void write_run(const std::vector<RankedList>& lists, const std::string& tag,
               std::ostream& out);

// Reads a TREC run back into RankedLists (query groups in first-seen order,
// entries sorted by their rank column). Non-contiguous ranks are reassigned
// with a warning.
std::vector<RankedList> read_run(const std::string& path,
                                 std::vector<std::string>* warnings = nullptr);
std::vector<RankedList> parse_run(std::istream& in, const std::string& name,
                                  std::vector<std::string>* warnings = nullptr);

// Standard 4-column qrels: "query_id 0 docid grade". Later duplicates of a
// (query, doc) pair overwrite earlier ones with a warning.
QrelSet read_qrels(const std::string& path,
                   std::vector<std::string>* warnings = nullptr);
QrelSet parse_qrels(std::istream& in, const std::string& name,
                    std::vector<std::string>* warnings = nullptr);

}  // namespace convsearch
