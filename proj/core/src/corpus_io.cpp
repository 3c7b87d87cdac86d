#include "convsearch/corpus_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "convsearch/errors.hpp"

namespace convsearch {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open \"" + path + "\"");
  }
  return in;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings != nullptr) {
    warnings->push_back(std::move(message));
  }
}

}  // namespace

Corpus read_corpus(std::istream& in, const std::string& name) {
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) {
      continue;
    }
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(name + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!record.is_object() || !record.contains("docid") ||
        !record["docid"].is_string() || !record.contains("text") ||
        !record["text"].is_string()) {
      throw ParseError(name + ":" + std::to_string(lineno) +
                       ": expected {\"docid\": string, \"text\": string}");
    }
    Passage passage{record["docid"].get<std::string>(),
                    record["text"].get<std::string>()};
    if (corpus.find(passage.docid) != nullptr) {
      throw ParseError(name + ":" + std::to_string(lineno) +
                       ": duplicate docid \"" + passage.docid + "\"");
    }
    if (passage.docid.empty()) {
      throw ParseError(name + ":" + std::to_string(lineno) + ": empty docid");
    }
    corpus.add(std::move(passage));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  auto in = open_input(path);
  return read_corpus(in, path);
}

namespace {

std::string string_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw ParseError(where + ": missing \"" + key + "\"");
  }
  return obj[key].get<std::string>();
}

}  // namespace

std::vector<Dialogue> load_dialogue_file(const std::string& path,
                                         std::vector<std::string>* warnings) {
  auto in = open_input(path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("dialogues") ||
      !root["dialogues"].is_array()) {
    throw ParseError(path + ": expected top-level {\"dialogues\": [...]}");
  }

  std::vector<Dialogue> dialogues;
  std::unordered_set<std::string> dialogue_ids;
  for (const json& d : root["dialogues"]) {
    Dialogue dialogue;
    dialogue.dialogue_id = string_field(d, "dialogue_id", path + ": dialogue");
    const std::string where = path + ": dialogue " + dialogue.dialogue_id;
    if (!dialogue_ids.insert(dialogue.dialogue_id).second) {
      throw ParseError(where + ": duplicate dialogue_id");
    }

    if (d.contains("ptkb")) {
      if (!d["ptkb"].is_array()) {
        throw ParseError(where + ": \"ptkb\" must be an array");
      }
      std::size_t i = 0;
      for (const json& s : d["ptkb"]) {
        ++i;
        PtkbStatement statement;
        statement.text = string_field(s, "text", where + " ptkb " + std::to_string(i));
        statement.id = s.contains("id") && s["id"].is_string()
                           ? s["id"].get<std::string>()
                           : "p" + std::to_string(i);
        dialogue.ptkb.push_back(std::move(statement));
      }
    }

    if (!d.contains("turns") || !d["turns"].is_array()) {
      throw ParseError(where + ": missing \"turns\" array");
    }
    if (d["turns"].empty()) {
      warn(warnings, where + ": empty turn list, skipped");
      continue;
    }
    std::unordered_set<std::string> turn_ids;
    std::size_t i = 0;
    for (const json& t : d["turns"]) {
      ++i;
      DialogueTurn turn;
      turn.utterance = string_field(t, "utterance", where + " turn " + std::to_string(i));
      turn.turn_id = t.contains("turn_id") && t["turn_id"].is_string()
                         ? t["turn_id"].get<std::string>()
                         : std::to_string(i);
      if (t.contains("response") && t["response"].is_string()) {
        turn.response = t["response"].get<std::string>();
      }
      if (!turn_ids.insert(turn.turn_id).second) {
        throw ParseError(where + " turn " + std::to_string(i) +
                         ": duplicate turn_id \"" + turn.turn_id + "\"");
      }
      dialogue.turns.push_back(std::move(turn));
    }
    dialogues.push_back(std::move(dialogue));
  }
  return dialogues;
}

std::vector<DialogueState> explode_dialogue(const Dialogue& dialogue) {
  std::vector<DialogueState> states;
  states.reserve(dialogue.turns.size());
  for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
    DialogueState state;
    state.dialogue_id = dialogue.dialogue_id;
    state.ptkb = dialogue.ptkb;
    for (std::size_t h = 0; h < i; ++h) {
      DialogueTurn turn = dialogue.turns[h];
      if (!turn.response.has_value()) {
        turn.response = "";  // history turns must read as completed
      }
      state.history.push_back(std::move(turn));
    }
    state.current = dialogue.turns[i];
    state.current.response.reset();
    states.push_back(std::move(state));
  }
  return states;
}

std::vector<DialogueState> load_dialogues(const std::string& path,
                                          std::vector<std::string>* warnings) {
  std::vector<DialogueState> states;
  for (const Dialogue& dialogue : load_dialogue_file(path, warnings)) {
    auto exploded = explode_dialogue(dialogue);
    states.insert(states.end(), std::make_move_iterator(exploded.begin()),
                  std::make_move_iterator(exploded.end()));
  }
  return states;
}

void write_run(const std::vector<RankedList>& lists, const std::string& tag,
               std::ostream& out) {
  if (tag.empty() ||
      std::any_of(tag.begin(), tag.end(),
                  [](unsigned char c) { return std::isspace(c); })) {
    throw ValidationError("run tag must be non-empty without whitespace: \"" +
                          tag + "\"");
  }
  char score_buf[32];
  for (const RankedList& list : lists) {
    for (const RankedEntry& entry : list.entries) {
      std::snprintf(score_buf, sizeof(score_buf), "%.6f", entry.score);
      out << list.query_id << " Q0 " << entry.docid << ' ' << entry.rank << ' '
          << score_buf << ' ' << tag << '\n';
    }
  }
}

void write_run(const std::vector<RankedList>& lists, const std::string& tag,
               const std::string& path) {
  std::ostringstream buffer;
  write_run(lists, tag, buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write \"" + path + "\"");
  }
  out << buffer.str();
  if (!out.flush()) {
    throw IoError("write failed for \"" + path + "\"");
  }
}

std::vector<RankedList> parse_run(std::istream& in, const std::string& name,
                                  std::vector<std::string>* warnings) {
  struct Row {
    std::string docid;
    double score;
    long rank;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Row>> by_query;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) {
      continue;
    }
    std::istringstream fields(line);
    std::string qid, q0, docid, rank_text, score_text, tag;
    if (!(fields >> qid >> q0 >> docid >> rank_text >> score_text >> tag)) {
      throw ParseError(name + ":" + std::to_string(lineno) +
                       ": expected 6 columns");
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError(name + ":" + std::to_string(lineno) +
                       ": trailing content \"" + extra + "\"");
    }
    Row row;
    row.docid = docid;
    try {
      row.rank = std::stol(rank_text);
      row.score = std::stod(score_text);
    } catch (const std::exception&) {
      throw ParseError(name + ":" + std::to_string(lineno) +
                       ": bad rank or score");
    }
    if (!by_query.contains(qid)) {
      order.push_back(qid);
    }
    by_query[qid].push_back(std::move(row));
  }

  std::vector<RankedList> lists;
  lists.reserve(order.size());
  for (const std::string& qid : order) {
    auto& rows = by_query[qid];
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.rank < b.rank; });
    RankedList list;
    list.query_id = qid;
    bool renumbered = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].rank != static_cast<long>(i + 1)) {
        renumbered = true;
      }
      list.entries.push_back({std::move(rows[i].docid), rows[i].score,
                              static_cast<std::uint32_t>(i + 1)});
    }
    if (renumbered) {
      warn(warnings, name + ": query " + qid + ": ranks not contiguous, reassigned");
    }
    lists.push_back(std::move(list));
  }
  return lists;
}

std::vector<RankedList> read_run(const std::string& path,
                                 std::vector<std::string>* warnings) {
  auto in = open_input(path);
  return parse_run(in, path, warnings);
}

QrelSet parse_qrels(std::istream& in, const std::string& name,
                    std::vector<std::string>* warnings) {
  QrelSet qrels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) {
      continue;
    }
    std::istringstream fields(line);
    std::string qid, iteration, docid, grade_text;
    if (!(fields >> qid >> iteration >> docid >> grade_text)) {
      throw ParseError(name + ":" + std::to_string(lineno) +
                       ": expected 4 columns");
    }
    int grade = 0;
    try {
      std::size_t used = 0;
      grade = std::stoi(grade_text, &used);
      if (used != grade_text.size()) {
        throw std::invalid_argument(grade_text);
      }
    } catch (const std::exception&) {
      throw ParseError(name + ":" + std::to_string(lineno) +
                       ": grade \"" + grade_text + "\" is not an integer");
    }
    if (grade < 0) {
      throw ParseError(name + ":" + std::to_string(lineno) +
                       ": negative grade " + std::to_string(grade));
    }
    if (qrels.judgments(qid) != nullptr &&
        qrels.judgments(qid)->contains(docid)) {
      warn(warnings, name + ":" + std::to_string(lineno) + ": duplicate pair (" +
                         qid + ", " + docid + "), keeping last value");
    }
    qrels.set(qid, docid, grade);
  }
  return qrels;
}

QrelSet read_qrels(const std::string& path, std::vector<std::string>* warnings) {
  auto in = open_input(path);
  return parse_qrels(in, path, warnings);
}

}  // namespace convsearch
