#include "convsearch/generation.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_set>

#include "convsearch/errors.hpp"
#include "convsearch/prompts.hpp"

namespace convsearch {

namespace {

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

std::string first_sentence(std::string_view text) {
  const auto cut = text.find_first_of(".!?");
  if (cut == std::string_view::npos) {
    return trimmed(text);
  }
  return trimmed(text.substr(0, cut + 1));
}

std::string bullet_passages(std::span<const Passage> passages) {
  std::ostringstream out;
  for (std::size_t i = 0; i < passages.size(); ++i) {
    if (i > 0) {
      out << '\n';
    }
    out << "- " << passages[i].docid << ": " << passages[i].text;
  }
  return out.str();
}

std::string bullet_lines(std::span<const std::string> lines) {
  std::ostringstream out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) {
      out << '\n';
    }
    out << "- " << lines[i];
  }
  return out.str();
}

}  // namespace

void GenerationParams::validate() const {
  if (num_passages < 1) {
    throw ValidationError("num_passages must be >= 1");
  }
  if (num_direct_passages > num_passages) {
    throw ValidationError("num_direct_passages must be <= num_passages");
  }
  if (summary_chunk_size < 1) {
    throw ValidationError("summary_chunk_size must be >= 1");
  }
}

std::vector<PtkbStatement> update_ptkb(const DialogueState& state,
                                       TextGenerator& generator,
                                       std::vector<std::string>* warnings) {
  std::vector<PtkbStatement> updated = state.ptkb;
  const std::string prompt =
      prompts::fill(prompts::ptkb_update_template(),
                    {{"ptkb", prompts::serialize_ptkb(state.ptkb)},
                     {"utterance", state.current.utterance}});
  std::string answer;
  try {
    auto texts = generator.generate(prompt, 1, 0.0);
    if (texts.empty()) {
      throw EndpointError("empty ptkb_update output");
    }
    answer = texts.front();
  } catch (const Error& e) {
    warn(warnings, std::string("ptkb update failed, keeping previous PTKB: ") +
                       e.what());
    return updated;
  }

  std::string lowered = trimmed(answer);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lowered == "none" || lowered.empty()) {
    return updated;
  }

  std::unordered_set<std::string> existing_ids;
  for (const PtkbStatement& statement : updated) {
    existing_ids.insert(statement.id);
  }
  std::istringstream lines(answer);
  std::string line;
  std::size_t serial = updated.size();
  while (std::getline(lines, line)) {
    const std::string text = trimmed(line);
    if (text.empty()) {
      continue;
    }
    std::string id;
    do {
      id = "p" + std::to_string(++serial);
    } while (existing_ids.contains(id));
    existing_ids.insert(id);
    updated.push_back({id, text, false});
  }
  return updated;
}

std::vector<PtkbStatement> select_provenance(const DialogueState& state,
                                             TextGenerator& generator,
                                             std::vector<std::string>* warnings) {
  if (state.ptkb.empty()) {
    return {};
  }
  const std::string prompt =
      prompts::fill(prompts::ptkb_select_template(),
                    {{"ptkb", prompts::serialize_ptkb(state.ptkb)},
                     {"utterance", state.current.utterance}});
  std::string answer;
  try {
    auto texts = generator.generate(prompt, 1, 0.0);
    if (texts.empty()) {
      throw EndpointError("empty ptkb_select output");
    }
    answer = texts.front();
  } catch (const Error& e) {
    warn(warnings, std::string("provenance selection failed: ") + e.what());
    return {};
  }

  std::unordered_set<std::string> wanted;
  std::string token;
  for (char c : answer) {
    if (c == ',' || c == '\n') {
      if (const std::string id = trimmed(token); !id.empty()) {
        wanted.insert(id);
      }
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (const std::string id = trimmed(token); !id.empty() && id != "none") {
    wanted.insert(id);
  }

  std::vector<PtkbStatement> selected;
  for (const PtkbStatement& statement : state.ptkb) {
    if (wanted.contains(statement.id)) {
      PtkbStatement flagged = statement;
      flagged.relevant = true;
      selected.push_back(std::move(flagged));
    }
  }
  return selected;
}

ChunkedPassages filter_and_chunk(const RankedList& list, const Corpus& corpus,
                                 const GenerationParams& params) {
  params.validate();
  ChunkedPassages out;

  std::vector<const Passage*> kept;
  for (const RankedEntry& entry : list.entries) {
    if (entry.score <= params.score_threshold) {
      continue;  // "exceed" is strict
    }
    const Passage* passage = corpus.find(entry.docid);
    if (passage == nullptr) {
      throw ValidationError("filter_and_chunk: docid \"" + entry.docid +
                            "\" not in corpus");
    }
    kept.push_back(passage);
    if (kept.size() == params.num_passages) {
      break;
    }
  }

  const std::size_t direct = std::min<std::size_t>(params.num_direct_passages,
                                                   kept.size());
  for (std::size_t i = 0; i < direct; ++i) {
    out.direct.push_back(*kept[i]);
  }
  for (std::size_t i = direct; i < kept.size(); i += params.summary_chunk_size) {
    std::vector<Passage> chunk;
    for (std::size_t j = i; j < kept.size() && j < i + params.summary_chunk_size;
         ++j) {
      chunk.push_back(*kept[j]);
    }
    out.chunks.push_back(std::move(chunk));
  }
  return out;
}

std::vector<std::string> summarize_chunks(std::span<const std::vector<Passage>> chunks,
                                          TextGenerator& generator,
                                          std::vector<std::string>* warnings) {
  std::vector<std::string> summaries;
  summaries.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const std::string prompt =
        prompts::fill(prompts::summarize_template(),
                      {{"passages", bullet_passages(chunks[i])}});
    try {
      auto texts = generator.generate(prompt, 1, 0.0);
      if (texts.empty() || trimmed(texts.front()).empty()) {
        throw EndpointError("empty summary");
      }
      summaries.push_back(trimmed(texts.front()));
    } catch (const Error& e) {
      warn(warnings, "summarization failed for chunk " + std::to_string(i) +
                         ", using first sentences: " + e.what());
      std::ostringstream fallback;
      for (std::size_t j = 0; j < chunks[i].size(); ++j) {
        if (j > 0) {
          fallback << ' ';
        }
        fallback << first_sentence(chunks[i][j].text);
      }
      summaries.push_back(fallback.str());
    }
  }
  return summaries;
}

ResponseResult generate_response(const DialogueState& state,
                                 const GenerationInput& input, ResponseMode mode,
                                 TextGenerator& generator) {
  if (mode == ResponseMode::interactive && !input.rewritten_query.has_value()) {
    throw ValidationError("interactive response requires a rewritten query");
  }

  if (input.direct_passages.empty() && input.summaries.empty()) {
    // Nothing retrieved: templated answer from the profile alone.
    std::string text = "I could not find passages that answer this question.";
    if (!input.provenance.empty()) {
      text += " Based on what I know about you:";
      for (const PtkbStatement& statement : input.provenance) {
        text += " " + statement.text + ".";
      }
    }
    return {text, false};
  }

  std::map<std::string, std::string> vars{
      {"history", prompts::serialize_history(state.history)},
      {"utterance", state.current.utterance},
      {"passages", bullet_passages(input.direct_passages)},
      {"ptkb", prompts::serialize_ptkb(input.provenance)},
  };
  std::string prompt;
  if (mode == ResponseMode::interactive) {
    vars["query"] = input.rewritten_query.value();
    prompt = prompts::fill(prompts::response_template_interactive(), vars);
  } else {
    vars["summaries"] = bullet_lines(input.summaries);
    vars["query_section"] = input.rewritten_query.has_value()
                                ? "[QUERY]\n" + input.rewritten_query.value() + "\n"
                                : "";
    prompt = prompts::fill(prompts::response_template_offline(), vars);
  }

  try {
    auto texts = generator.generate(prompt, 1, 0.0);
    if (texts.empty() || trimmed(texts.front()).empty()) {
      throw EndpointError("empty response");
    }
    return {trimmed(texts.front()), false};
  } catch (const Error&) {
    return {"I am sorry, I cannot produce a grounded answer right now.", true};
  }
}

}  // namespace convsearch
