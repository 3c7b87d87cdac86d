#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "convsearch/corpus_io.hpp"
#include "convsearch/errors.hpp"

using namespace convsearch;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& contents, const std::string& tag = "t") {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("convsearch_" + tag + std::to_string(::getpid()) + "_" +
            std::to_string(counter++) + ".tmp");
    std::ofstream out(path, std::ios::binary);
    out << contents;
  }
  ~TempFile() { std::filesystem::remove(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("load_corpus counts docs and token lengths") {
  TempFile file(R"({"docid":"d1","text":"a b"})"
                "\n"
                R"({"docid":"d2","text":"c"})"
                "\n");
  const Corpus corpus = load_corpus(file.str());
  CHECK(corpus.doc_count() == 2);
  CHECK(corpus.avg_doc_len() == doctest::Approx(1.5));
  CHECK(corpus.find("d1") != nullptr);
  CHECK(corpus.find("dX") == nullptr);
}

TEST_CASE("load_corpus on an empty file") {
  TempFile file("");
  const Corpus corpus = load_corpus(file.str());
  CHECK(corpus.doc_count() == 0);
  CHECK(corpus.avg_doc_len() == 0.0);
}

TEST_CASE("load_corpus rejects duplicate docids with the line number") {
  TempFile file(R"({"docid":"d1","text":"a"})"
                "\n"
                R"({"docid":"d1","text":"b"})"
                "\n");
  CHECK_THROWS_WITH_AS(load_corpus(file.str()),
                       doctest::Contains("d1"), ParseError);
  try {
    load_corpus(file.str());
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("load_corpus reports malformed lines") {
  TempFile file("{\"docid\":\"d1\",\"text\":\"a\"}\nnot json\n");
  CHECK_THROWS_AS(load_corpus(file.str()), ParseError);
}

TEST_CASE("load_corpus propagates missing files as IoError") {
  CHECK_THROWS_AS(load_corpus("/no/such/file.jsonl"), IoError);
}

namespace {

const char* kDialogueJson = R"({
  "dialogues": [
    {"dialogue_id": "d1",
     "ptkb": [{"id": "p1", "text": "likes tea"}],
     "turns": [
       {"turn_id": "1", "utterance": "u one", "response": "r one"},
       {"turn_id": "2", "utterance": "u two", "response": "r two"},
       {"turn_id": "3", "utterance": "u three"}
     ]}
  ]
})";

}  // namespace

TEST_CASE("load_dialogues yields one state per turn with growing history") {
  TempFile file(kDialogueJson);
  const auto states = load_dialogues(file.str());
  REQUIRE(states.size() == 3);
  CHECK(states[0].history.size() == 0);
  CHECK(states[1].history.size() == 1);
  CHECK(states[2].history.size() == 2);
  CHECK(states[2].current.utterance == "u three");
  CHECK_FALSE(states[2].current.response.has_value());
  for (const auto& state : states) {
    for (const auto& turn : state.history) {
      CHECK(turn.response.has_value());
    }
  }
  CHECK(query_id(states[1]) == "d1_2");

  // Replaying history plus current reproduces the source turn order.
  std::vector<std::string> replay;
  for (const auto& turn : states.back().history) {
    replay.push_back(turn.utterance);
  }
  replay.push_back(states.back().current.utterance);
  CHECK(replay == std::vector<std::string>{"u one", "u two", "u three"});
}

TEST_CASE("load_dialogues accepts an empty ptkb") {
  TempFile file(R"({"dialogues":[{"dialogue_id":"d1","ptkb":[],
    "turns":[{"utterance":"hi"}]}]})");
  const auto states = load_dialogues(file.str());
  REQUIRE(states.size() == 1);
  CHECK(states[0].ptkb.empty());
  CHECK(states[0].current.turn_id == "1");  // defaulted
}

TEST_CASE("load_dialogues schema errors name the dialogue and turn") {
  TempFile file(R"({"dialogues":[{"dialogue_id":"d9",
    "turns":[{"utterance":"ok"},{"response":"no utterance"}]}]})");
  try {
    load_dialogues(file.str());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("d9") != std::string::npos);
    CHECK(what.find("2") != std::string::npos);
    CHECK(what.find("utterance") != std::string::npos);
  }
}

TEST_CASE("load_dialogues skips empty dialogues with a warning") {
  TempFile file(R"({"dialogues":[{"dialogue_id":"empty","turns":[]},
    {"dialogue_id":"d1","turns":[{"utterance":"hi"}]}]})");
  std::vector<std::string> warnings;
  const auto states = load_dialogues(file.str(), &warnings);
  CHECK(states.size() == 1);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("empty") != std::string::npos);
}

TEST_CASE("write_run emits the 6-column TREC format") {
  RankedList list;
  list.query_id = "q1";
  list.entries = {{"dA", 2.5, 1}};
  std::ostringstream out;
  write_run({list}, "run1", out);
  CHECK(out.str() == "q1 Q0 dA 1 2.500000 run1\n");
}

TEST_CASE("write_run with no lists writes an empty file") {
  std::ostringstream out;
  write_run({}, "tag", out);
  CHECK(out.str().empty());
}

TEST_CASE("write_run rejects whitespace in the tag") {
  std::ostringstream out;
  CHECK_THROWS_AS(write_run({}, "my run", out), ValidationError);
  CHECK_THROWS_AS(write_run({}, "", out), ValidationError);
}

TEST_CASE("run files round-trip through write and read") {
  std::mt19937 gen(7);
  std::vector<RankedList> lists;
  for (int q = 0; q < 5; ++q) {
    std::vector<std::pair<std::string, double>> scored;
    double score = 100.0;
    const std::size_t docs = 1 + gen() % 20;
    for (std::size_t d = 0; d < docs; ++d) {
      score -= static_cast<double>(gen() % 100) / 16.0;  // 6-decimal friendly
      scored.emplace_back("doc" + std::to_string(q) + "_" + std::to_string(d),
                          score);
    }
    lists.push_back(make_ranked_list("q" + std::to_string(q), std::move(scored)));
  }

  std::ostringstream out;
  write_run(lists, "tag", out);
  std::istringstream in(out.str());
  std::vector<std::string> warnings;
  const auto parsed = parse_run(in, "buffer", &warnings);
  CHECK(warnings.empty());
  REQUIRE(parsed.size() == lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) {
    CHECK(parsed[i].query_id == lists[i].query_id);
    REQUIRE(parsed[i].entries.size() == lists[i].entries.size());
    for (std::size_t e = 0; e < lists[i].entries.size(); ++e) {
      CHECK(parsed[i].entries[e].docid == lists[i].entries[e].docid);
      CHECK(parsed[i].entries[e].rank == lists[i].entries[e].rank);
      CHECK(parsed[i].entries[e].score ==
            doctest::Approx(lists[i].entries[e].score).epsilon(1e-6));
    }
    parsed[i].validate();
  }
}

TEST_CASE("ranked list scores never increase with rank") {
  RankedList bad;
  bad.query_id = "q";
  bad.entries = {{"a", 1.0, 1}, {"b", 2.0, 2}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("read_qrels parses 4-column judgments") {
  TempFile file("q1 0 dA 2\n");
  const QrelSet qrels = read_qrels(file.str());
  CHECK(qrels.grade("q1", "dA") == 2);
  CHECK(qrels.grade("q1", "dB") == 0);
}

TEST_CASE("read_qrels lets later duplicates win, with a warning") {
  TempFile file("q1 0 dA 1\nq1 0 dA 3\n");
  std::vector<std::string> warnings;
  const QrelSet qrels = read_qrels(file.str(), &warnings);
  CHECK(qrels.grade("q1", "dA") == 3);
  CHECK(warnings.size() == 1);
}

TEST_CASE("read_qrels rejects non-integer grades with the line number") {
  TempFile file("q1 0 dA x\n");
  try {
    read_qrels(file.str());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":1") != std::string::npos);
  }
}

TEST_CASE("read_qrels rejects negative grades") {
  TempFile file("q1 0 dA -2\n");
  CHECK_THROWS_AS(read_qrels(file.str()), ParseError);
}
