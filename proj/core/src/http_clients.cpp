#include "convsearch/http_clients.hpp"

#include <chrono>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "convsearch/errors.hpp"
#include "convsearch/prompts.hpp"

namespace convsearch {

using nlohmann::json;

namespace {

httplib::Client make_client(const std::string& base_url, double timeout_s) {
  httplib::Client client(base_url);
  const auto seconds = static_cast<time_t>(timeout_s);
  const auto micros = static_cast<time_t>((timeout_s - std::floor(timeout_s)) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  return client;
}

json post_json(const std::string& base_url, const std::string& path,
               const json& body, double timeout_s, int max_retries) {
  std::string last_error;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    auto client = make_client(base_url, timeout_s);
    auto result = client.Post(path, body.dump(), "application/json");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status != 200) {
      last_error = "HTTP " + std::to_string(result->status);
      continue;
    }
    try {
      return json::parse(result->body);
    } catch (const json::exception& e) {
      last_error = e.what();
    }
  }
  throw EndpointError(base_url + path + ": " + last_error);
}

}  // namespace

void GenEndpoint::validate() const {
  if (timeout_s <= 0.0) {
    throw ValidationError("endpoint timeout must be > 0");
  }
}

HttpTextGenerator::HttpTextGenerator(GenEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  endpoint_.validate();
}

std::vector<std::string> HttpTextGenerator::generate(const std::string& prompt,
                                                     std::size_t n,
                                                     double temperature) {
  const json body = {{"prompt", prompt}, {"n", n}, {"temperature", temperature}};
  const json reply = post_json(endpoint_.base_url, "/generate", body,
                               endpoint_.timeout_s, endpoint_.max_retries);
  if (!reply.contains("texts") || !reply["texts"].is_array()) {
    throw EndpointError(endpoint_.base_url + "/generate: missing \"texts\"");
  }
  std::vector<std::string> texts;
  for (const json& text : reply["texts"]) {
    if (text.is_string()) {
      texts.push_back(text.get<std::string>());
    }
  }
  return texts;
}

HttpRewardScorer::HttpRewardScorer(RewardEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {}

double HttpRewardScorer::score(const std::string& query,
                               const DialogueState& state) {
  json history = json::array();
  for (const DialogueTurn& turn : state.history) {
    history.push_back(turn.utterance);
    history.push_back(turn.response.value_or(""));
  }
  json ptkb = json::array();
  for (const PtkbStatement& statement : state.ptkb) {
    ptkb.push_back(statement.text);
  }
  const json body = {{"query", query}, {"history", history}, {"ptkb", ptkb}};
  const json reply = post_json(endpoint_.base_url, "/reward", body,
                               endpoint_.timeout_s, endpoint_.max_retries);
  if (!reply.contains("score") || !reply["score"].is_number()) {
    throw EndpointError(endpoint_.base_url + "/reward: missing \"score\"");
  }
  return reply["score"].get<double>();
}

HttpRerankScorer::HttpRerankScorer(RerankEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  if (endpoint_.batch_size < 1) {
    throw ValidationError("rerank batch_size must be >= 1");
  }
}

std::vector<double> HttpRerankScorer::score_batch(
    const std::string& query, std::span<const Passage> passages) {
  std::vector<double> scores;
  scores.reserve(passages.size());
  for (std::size_t begin = 0; begin < passages.size();
       begin += endpoint_.batch_size) {
    const std::size_t end =
        std::min(passages.size(), begin + endpoint_.batch_size);
    json batch = json::array();
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back({{"docid", passages[i].docid}, {"text", passages[i].text}});
    }
    const json body = {{"query", query}, {"passages", batch}};
    const json reply = post_json(endpoint_.base_url, "/rerank", body,
                                 endpoint_.timeout_s, endpoint_.max_retries);
    if (!reply.contains("scores") || !reply["scores"].is_array() ||
        reply["scores"].size() != end - begin) {
      throw EndpointError(endpoint_.base_url + "/rerank: bad \"scores\"");
    }
    for (const json& score : reply["scores"]) {
      scores.push_back(score.get<double>());
    }
  }
  return scores;
}

InteractiveClient::InteractiveClient(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

NextTurn InteractiveClient::next(const std::string& session_id) {
  auto client = make_client(base_url_, timeout_s_);
  auto result = client.Get("/session/" + session_id + "/next");
  if (!result || result->status != 200) {
    throw EndpointError(base_url_ + ": session next failed" +
                        (result ? " (HTTP " + std::to_string(result->status) + ")"
                                : " (" + httplib::to_string(result.error()) + ")"));
  }
  json reply;
  try {
    reply = json::parse(result->body);
  } catch (const json::exception& e) {
    throw EndpointError(base_url_ + ": session next: " + e.what());
  }

  NextTurn turn;
  if (reply.value("end", false)) {
    turn.end = true;
    return turn;
  }
  if (!reply.contains("utterance") || !reply["utterance"].is_string()) {
    throw EndpointError(base_url_ + ": session next: missing \"utterance\"");
  }
  turn.utterance = reply["utterance"].get<std::string>();
  turn.turn_id = reply.value("turn_id", "");
  if (reply.contains("ptkb") && reply["ptkb"].is_array()) {
    for (const json& statement : reply["ptkb"]) {
      turn.ptkb.push_back({statement.value("id", ""),
                           statement.value("text", ""), false});
    }
  }
  return turn;
}

void InteractiveClient::post_response(const std::string& session_id,
                                      const SessionResponse& body) {
  const json payload = {{"response", body.response},
                        {"passages", body.passages},
                        {"ptkb", body.ptkb},
                        {"rewrites", body.rewrites}};
  auto client = make_client(base_url_, timeout_s_);
  auto result = client.Post("/session/" + session_id + "/response",
                            payload.dump(), "application/json");
  if (!result || (result->status != 204 && result->status != 200)) {
    throw EndpointError(base_url_ + ": posting response failed");
  }
}

}  // namespace convsearch
