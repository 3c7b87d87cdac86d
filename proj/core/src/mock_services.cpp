#include "convsearch/mock_services.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "convsearch/errors.hpp"
#include "convsearch/prompts.hpp"
#include "convsearch/rerank.hpp"
#include "convsearch/tokenizer.hpp"

namespace convsearch {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t hash = seed;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

namespace {

std::vector<std::string> distinct_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto& token : tokenize(text)) {
    if (seen.insert(token).second) {
      out.push_back(std::move(token));
    }
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    auto line = text.substr(pos, end - pos);
    if (!line.empty()) {
      lines.emplace_back(line);
    }
    if (end == text.size()) {
      break;
    }
    pos = end + 1;
  }
  return lines;
}

std::string join(std::span<const std::string> parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out += sep;
    }
    out += parts[i];
  }
  return out;
}

std::string collapse_ws(std::string_view text) {
  std::string out;
  bool pending = false;
  for (unsigned char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending = !out.empty();
    } else {
      if (pending) {
        out.push_back(' ');
        pending = false;
      }
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

std::string rewrite_candidate(const std::string& prompt, std::uint64_t seed,
                              std::size_t index, double temperature) {
  const std::string base =
      collapse_ws(prompts::extract_section(prompt, "[QUESTION]"));
  if (index == 0) {
    return base;
  }
  const auto base_tokens = distinct_tokens(base);
  std::unordered_set<std::string> in_base(base_tokens.begin(), base_tokens.end());

  std::vector<std::string> context;
  for (auto& token :
       distinct_tokens(prompts::extract_section(prompt, "[HISTORY]") + " " +
                       prompts::extract_section(prompt, "[PROFILE]"))) {
    // Content tokens only; short glue words and statement ids add noise.
    if (token.size() >= 3 && !in_base.contains(token)) {
      context.push_back(std::move(token));
    }
  }
  if (context.empty()) {
    return base;
  }

  const std::size_t start = fnv1a64(prompt, seed) % context.size();
  const std::size_t stride =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(temperature)));
  std::vector<std::string> picked;
  std::unordered_set<std::string> used;
  for (std::size_t step = 0; picked.size() < index && step < context.size();
       ++step) {
    const std::string& token = context[(start + step * stride) % context.size()];
    if (used.insert(token).second) {
      picked.push_back(token);
    }
  }
  return picked.empty() ? base : base + " " + join(picked, " ");
}

std::string enhance(const std::string& prompt, const std::string& step) {
  const std::string history = prompts::extract_section(prompt, "[HISTORY]");
  if (step == "HS") {
    const auto lines = split_lines(history);
    if (lines.size() <= 2) {
      return history;
    }
    return lines.front() + "\n...\n" + lines.back();
  }
  const std::string utterance = prompts::extract_section(prompt, "[QUESTION]");
  auto tokens = distinct_tokens(utterance + " " + history);
  if (tokens.size() > 6) {
    tokens.resize(6);
  }
  std::string lowered = step;
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return history + "\n(" + lowered + ": " + join(tokens, " ") + ")";
}

std::string summarize(const std::string& prompt) {
  auto tokens = distinct_tokens(prompts::extract_section(prompt, "[PASSAGES]"));
  if (tokens.size() > 10) {
    tokens.resize(10);
  }
  return "Summary: " + join(tokens, " ");
}

std::string respond(const std::string& prompt) {
  const std::string passages = prompts::extract_section(prompt, "[PASSAGES]");
  const std::string summaries = prompts::extract_section(prompt, "[SUMMARIES]");
  const std::string profile = prompts::extract_section(prompt, "[PROFILE]");
  const std::string utterance =
      collapse_ws(prompts::extract_section(prompt, "[QUESTION]"));

  std::size_t evidence = 0;
  for (const auto& line : split_lines(passages)) {
    evidence += line.starts_with("- ") ? 1 : 0;
  }
  for (const auto& line : split_lines(summaries)) {
    evidence += line.starts_with("- ") ? 1 : 0;
  }

  std::vector<std::string> terms;
  for (auto& token : distinct_tokens(passages + " " + summaries)) {
    const bool has_digit = std::any_of(token.begin(), token.end(), [](char c) {
      return c >= '0' && c <= '9';
    });
    if (token.size() >= 3 && !has_digit) {
      terms.push_back(std::move(token));
      if (terms.size() == 5) {
        break;
      }
    }
  }

  std::ostringstream out;
  out << "Answer to \"" << utterance << "\": grounded in " << evidence
      << " evidence items";
  if (!profile.empty()) {
    out << " and " << split_lines(profile).size() << " profile notes";
  }
  out << ". Key terms: " << join(terms, " ") << ".";
  return out.str();
}

std::string ptkb_update(const std::string& prompt) {
  const std::string utterance = prompts::extract_section(prompt, "[QUESTION]");
  const std::string profile = prompts::extract_section(prompt, "[PROFILE]");

  std::unordered_set<std::string> existing;
  for (const auto& line : split_lines(profile)) {
    auto sep = line.find(": ");
    std::string text = sep == std::string::npos ? line : line.substr(sep + 2);
    existing.insert(join(tokenize(text), " "));
  }

  std::vector<std::string> added;
  std::string sentence;
  auto flush = [&] {
    const std::string normalized = join(tokenize(sentence), " ");
    sentence = collapse_ws(sentence);
    if (!sentence.empty() && !existing.contains(normalized)) {
      const auto tokens = tokenize(normalized);
      // A leading "I ..." or a possessive reads as a personal fact; a
      // mid-sentence "I" ("what can I eat") does not.
      const bool personal =
          (!tokens.empty() && tokens.front() == "i") ||
          std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) {
            return t == "my" || t == "me";
          });
      if (personal) {
        added.push_back(sentence);
      }
    }
    sentence.clear();
  };
  for (char c : utterance) {
    if (c == '.' || c == '!' || c == '?') {
      flush();
    } else {
      sentence.push_back(c);
    }
  }
  flush();
  return added.empty() ? "none" : join(added, "\n");
}

std::string ptkb_select(const std::string& prompt) {
  const std::string utterance = prompts::extract_section(prompt, "[QUESTION]");
  const std::string profile = prompts::extract_section(prompt, "[PROFILE]");

  std::unordered_set<std::string> content;
  for (const auto& token : tokenize(utterance)) {
    if (token.size() >= 3) {
      content.insert(token);
    }
  }

  std::vector<std::string> ids;
  for (const auto& line : split_lines(profile)) {
    auto sep = line.find(": ");
    if (sep == std::string::npos) {
      continue;
    }
    const auto tokens = tokenize(line.substr(sep + 2));
    const bool hit = std::any_of(tokens.begin(), tokens.end(),
                                 [&](const std::string& t) {
                                   return t.size() >= 3 && content.contains(t);
                                 });
    if (hit) {
      ids.push_back(line.substr(0, sep));
    }
  }
  return ids.empty() ? "none" : join(ids, ",");
}

}  // namespace

std::vector<std::string> MockTextGenerator::generate(const std::string& prompt,
                                                     std::size_t n,
                                                     double temperature) {
  const std::string task = prompts::task_of(prompt);
  if (task.empty()) {
    throw ValidationError("mock generator: prompt has no task line");
  }

  std::vector<std::string> texts;
  if (task == "rewrite") {
    texts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      texts.push_back(rewrite_candidate(prompt, seed_, i, temperature));
    }
    return texts;
  }
  if (task.starts_with("enhance ")) {
    texts.push_back(enhance(prompt, task.substr(8)));
  } else if (task == "summarize") {
    texts.push_back(summarize(prompt));
  } else if (task.starts_with("respond")) {
    texts.push_back(respond(prompt));
  } else if (task == "ptkb_update") {
    texts.push_back(ptkb_update(prompt));
  } else if (task == "ptkb_select") {
    texts.push_back(ptkb_select(prompt));
  } else {
    throw ValidationError("mock generator: unknown task \"" + task + "\"");
  }
  while (texts.size() < n) {
    texts.push_back(texts.front());
  }
  return texts;
}

std::vector<double> LexicalRerankScorer::score_batch(
    const std::string& query, std::span<const Passage> passages) {
  std::vector<double> scores;
  scores.reserve(passages.size());
  for (const Passage& passage : passages) {
    scores.push_back(lexical_overlap_f1(query, passage.text));
  }
  return scores;
}

std::vector<double> NoopRerankScorer::score_batch(
    const std::string& query, std::span<const Passage> passages) {
  (void)query;
  std::vector<double> scores;
  scores.reserve(passages.size());
  for (std::size_t i = 0; i < passages.size(); ++i) {
    scores.push_back(static_cast<double>(passages.size() - i));
  }
  return scores;
}

}  // namespace convsearch
