#include "convsearch/mock_server.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "convsearch/errors.hpp"
#include "convsearch/inverted_index.hpp"
#include "convsearch/mock_services.hpp"
#include "convsearch/rerank.hpp"
#include "convsearch/rewrite.hpp"

namespace convsearch {

using nlohmann::json;

struct MockServer::Impl {
  Corpus corpus;
  InvertedIndex index;
  MockTextGenerator generator;
  std::vector<Dialogue> sessions;

  httplib::Server server;
  std::thread thread;

  mutable std::mutex mutex;
  std::map<std::string, std::size_t> cursor;  // session -> next turn
  std::map<std::string, std::vector<std::string>> responses;

  Impl(Corpus corpus_in, std::uint64_t seed, std::vector<Dialogue> sessions_in)
      : corpus(std::move(corpus_in)),
        index(build_index(corpus)),
        generator(seed),
        sessions(std::move(sessions_in)) {}

  const Dialogue* find_session(const std::string& id) const {
    for (const Dialogue& dialogue : sessions) {
      if (dialogue.dialogue_id == id) {
        return &dialogue;
      }
    }
    return nullptr;
  }

  void route() {
    server.Post("/generate", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("prompt")) {
        res.status = 400;
        return;
      }
      json reply;
      reply["texts"] = generator.generate(body["prompt"].get<std::string>(),
                                          body.value("n", 1),
                                          body.value("temperature", 1.0));
      res.set_content(reply.dump(), "application/json");
    });

    server.Post("/reward", [this](const httplib::Request& req,
                                  httplib::Response& res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("query")) {
        res.status = 400;
        return;
      }
      // Lexical reward over the server's corpus; the wire carries no
      // query_id, so the qrels-based variant is in-process only.
      LexicalRewardScorer scorer(index);
      DialogueState state;
      const json reply = {
          {"score", scorer.score(body["query"].get<std::string>(), state)}};
      res.set_content(reply.dump(), "application/json");
    });

    server.Post("/rerank", [](const httplib::Request& req,
                              httplib::Response& res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("query") ||
          !body.contains("passages") || !body["passages"].is_array()) {
        res.status = 400;
        return;
      }
      const std::string query = body["query"].get<std::string>();
      json scores = json::array();
      for (const json& passage : body["passages"]) {
        scores.push_back(lexical_overlap_f1(query, passage.value("text", "")));
      }
      res.set_content(json{{"scores", scores}}.dump(), "application/json");
    });

    server.Get(R"(/session/([^/]+)/next)", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
      const std::string id = req.matches[1];
      const Dialogue* dialogue = find_session(id);
      if (dialogue == nullptr) {
        res.status = 404;
        return;
      }
      std::lock_guard<std::mutex> lock(mutex);
      std::size_t& position = cursor[id];
      if (position >= dialogue->turns.size()) {
        res.set_content(json{{"end", true}}.dump(), "application/json");
        return;
      }
      const DialogueTurn& turn = dialogue->turns[position];
      json reply = {{"turn_id", turn.turn_id}, {"utterance", turn.utterance}};
      if (position == 0 && !dialogue->ptkb.empty()) {
        json ptkb = json::array();
        for (const PtkbStatement& statement : dialogue->ptkb) {
          ptkb.push_back({{"id", statement.id}, {"text", statement.text}});
        }
        reply["ptkb"] = ptkb;
      }
      ++position;
      res.set_content(reply.dump(), "application/json");
    });

    server.Post(R"(/session/([^/]+)/response)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const std::string id = req.matches[1];
                  if (find_session(id) == nullptr) {
                    res.status = 404;
                    return;
                  }
                  json body = json::parse(req.body, nullptr, false);
                  if (body.is_discarded() || !body.contains("response")) {
                    res.status = 400;
                    return;
                  }
                  {
                    std::lock_guard<std::mutex> lock(mutex);
                    responses[id].push_back(body["response"].get<std::string>());
                  }
                  res.status = 204;
                });
  }
};

MockServer::MockServer(Corpus corpus, std::uint64_t seed,
                       std::vector<Dialogue> sessions)
    : impl_(std::make_unique<Impl>(std::move(corpus), seed, std::move(sessions))) {
  impl_->route();
}

MockServer::~MockServer() { stop(); }

int MockServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) {
      throw IoError("mock server: cannot bind to " + host);
    }
  } else if (!impl_->server.bind_to_port(host, port)) {
    throw IoError("mock server: cannot bind to " + host + ":" +
                  std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void MockServer::stop() {
  if (impl_ && impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

std::vector<std::string> MockServer::posted_responses(
    const std::string& session_id) const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  auto it = impl_->responses.find(session_id);
  return it == impl_->responses.end() ? std::vector<std::string>{} : it->second;
}

}  // namespace convsearch
