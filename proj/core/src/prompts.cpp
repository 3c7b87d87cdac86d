#include "convsearch/prompts.hpp"

#include <array>
#include <sstream>

#include "convsearch/errors.hpp"

namespace convsearch {

std::string_view enhance_step_name(EnhanceStep step) {
  switch (step) {
    case EnhanceStep::TS: return "TS";
    case EnhanceStep::QD: return "QD";
    case EnhanceStep::RE: return "RE";
    case EnhanceStep::PR: return "PR";
    case EnhanceStep::HS: return "HS";
  }
  throw ValidationError("unknown enhancement step");
}

EnhanceStep enhance_step_from_name(std::string_view name) {
  if (name == "TS") return EnhanceStep::TS;
  if (name == "QD") return EnhanceStep::QD;
  if (name == "RE") return EnhanceStep::RE;
  if (name == "PR") return EnhanceStep::PR;
  if (name == "HS") return EnhanceStep::HS;
  throw ValidationError("unknown enhancement step \"" + std::string(name) + "\"");
}

namespace prompts {

namespace {

const std::string kLlm4csRewrite = R"(### task: rewrite
Read the profile, the conversation and the current question. Reason step by
step about what the user is actually asking, resolve every pronoun and every
elliptical reference against the conversation, then write one self-contained
search query on a single line.
[PROFILE]
{{ptkb}}
[HISTORY]
{{history}}
[QUESTION]
{{utterance}}
[OUTPUT]
)";

const std::string kChiqRewrite = R"(### task: rewrite
The conversation below has already been cleaned up and disambiguated. Using
it and the profile, write one self-contained search query for the current
question on a single line.
[PROFILE]
{{ptkb}}
[HISTORY]
{{history}}
[QUESTION]
{{utterance}}
[OUTPUT]
)";

std::string step_prompt(std::string_view step, std::string_view instruction) {
  std::ostringstream out;
  out << "### task: enhance " << step << '\n'
      << instruction << '\n'
      << "[HISTORY]\n{{history}}\n[QUESTION]\n{{utterance}}\n[OUTPUT]\n";
  return out.str();
}

const std::array<std::string, 5> kStepTemplates = {
    step_prompt("TS", "Decide whether the current question switches to a new "
                      "topic. Return the conversation with the switch, if any, "
                      "marked explicitly."),
    step_prompt("QD", "Return the conversation with every ambiguous question "
                      "replaced by a fully disambiguated one."),
    step_prompt("RE", "Return the conversation with the last answer expanded "
                      "to state the details it only implies."),
    step_prompt("PR", "Write a plausible short answer to the current question "
                      "and return the conversation with that answer appended."),
    step_prompt("HS", "Return a summary of the conversation that keeps every "
                      "entity and constraint mentioned."),
};

const std::string kSummarize = R"(### task: summarize
Condense the passages below into one short, factual paragraph. Keep every
entity a search user could ask about.
[PASSAGES]
{{passages}}
[OUTPUT]
)";

const std::string kRespondInteractive = R"(### task: respond interactive
Answer the current question for this user, grounded only in the passages.
Mention the profile statements you relied on.
[HISTORY]
{{history}}
[QUESTION]
{{utterance}}
[QUERY]
{{query}}
[PASSAGES]
{{passages}}
[PROFILE]
{{ptkb}}
[OUTPUT]
)";

const std::string kRespondOffline = R"(### task: respond offline
Answer the current question for this user, grounded only in the passages and
the summaries. Mention the profile statements you relied on.
[HISTORY]
{{history}}
[QUESTION]
{{utterance}}
{{query_section}}[PASSAGES]
{{passages}}
[SUMMARIES]
{{summaries}}
[PROFILE]
{{ptkb}}
[OUTPUT]
)";

const std::string kPtkbUpdate = R"(### task: ptkb_update
List every new personal fact the current question reveals that is not
already in the profile, one per line. Answer none if there is nothing new.
[PROFILE]
{{ptkb}}
[QUESTION]
{{utterance}}
[OUTPUT]
)";

const std::string kPtkbSelect = R"(### task: ptkb_select
List the ids of the profile statements relevant to the current question,
comma separated. Answer none if none apply.
[PROFILE]
{{ptkb}}
[QUESTION]
{{utterance}}
[OUTPUT]
)";

}  // namespace

const std::string& rewrite_template(std::string_view strategy_name) {
  if (strategy_name == "llm4cs" || strategy_name == "llm4cs_no_pr") {
    return kLlm4csRewrite;
  }
  if (strategy_name == "chiq_ad" || strategy_name == "chiq_ad_no_hs") {
    return kChiqRewrite;
  }
  throw ValidationError("no rewrite template for strategy \"" +
                        std::string(strategy_name) + "\"");
}

const std::string& step_template(EnhanceStep step) {
  return kStepTemplates[static_cast<std::size_t>(step)];
}

const std::string& summarize_template() { return kSummarize; }
const std::string& response_template_interactive() { return kRespondInteractive; }
const std::string& response_template_offline() { return kRespondOffline; }
const std::string& ptkb_update_template() { return kPtkbUpdate; }
const std::string& ptkb_select_template() { return kPtkbSelect; }

std::string fill(std::string_view tmpl,
                 const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    const auto close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw ValidationError("unterminated placeholder in template");
    }
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = vars.find(key);
    if (it == vars.end()) {
      throw ValidationError("no value for placeholder {{" + key + "}}");
    }
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

std::string task_of(std::string_view prompt) {
  constexpr std::string_view prefix = "### task:";
  if (!prompt.starts_with(prefix)) {
    return "";
  }
  auto line_end = prompt.find('\n');
  if (line_end == std::string_view::npos) {
    line_end = prompt.size();
  }
  auto task = prompt.substr(prefix.size(), line_end - prefix.size());
  while (!task.empty() && task.front() == ' ') task.remove_prefix(1);
  while (!task.empty() && (task.back() == ' ' || task.back() == '\r')) {
    task.remove_suffix(1);
  }
  return std::string(task);
}

std::string extract_section(std::string_view prompt, std::string_view marker) {
  std::string body;
  bool inside = false;
  std::size_t pos = 0;
  while (pos <= prompt.size()) {
    auto line_end = prompt.find('\n', pos);
    if (line_end == std::string_view::npos) {
      line_end = prompt.size();
    }
    auto line = prompt.substr(pos, line_end - pos);
    const bool is_header =
        line.size() >= 2 && line.front() == '[' && line.back() == ']';
    if (inside) {
      if (is_header) {
        break;
      }
      body.append(line);
      body.push_back('\n');
    } else if (line == marker) {
      inside = true;
    }
    if (line_end == prompt.size()) {
      break;
    }
    pos = line_end + 1;
  }
  while (!body.empty() && (body.back() == '\n' || body.back() == ' ')) {
    body.pop_back();
  }
  return body;
}

std::string serialize_history(std::span<const DialogueTurn> history) {
  std::ostringstream out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i > 0) {
      out << '\n';
    }
    out << "User: " << history[i].utterance << "\nAssistant: "
        << history[i].response.value_or("");
  }
  return out.str();
}

std::string serialize_ptkb(std::span<const PtkbStatement> ptkb) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ptkb.size(); ++i) {
    if (i > 0) {
      out << '\n';
    }
    out << ptkb[i].id << ": " << ptkb[i].text;
  }
  return out.str();
}

}  // namespace prompts
}  // namespace convsearch
