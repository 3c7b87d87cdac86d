#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "convsearch/types.hpp"

namespace convsearch {

// History-enhancement steps: topic switch, question disambiguation,
// response expansion, pseudo response, history summary.
enum class EnhanceStep { TS, QD, RE, PR, HS };

std::string_view enhance_step_name(EnhanceStep step);
EnhanceStep enhance_step_from_name(std::string_view name);

namespace prompts {

// Every template starts with a "### task: <name>" line and carries its
// inputs in bracketed sections ([PROFILE], [HISTORY], [QUESTION], [QUERY],
// [PASSAGES], [SUMMARIES]) closed by [OUTPUT]. The deterministic mock
// generator dispatches on the task line and reads the sections; a real LLM
// reads them as ordinary structured prompt text. Placeholders use {{name}}.

const std::string& rewrite_template(std::string_view strategy_name);
const std::string& step_template(EnhanceStep step);
const std::string& summarize_template();
const std::string& response_template_interactive();
const std::string& response_template_offline();
const std::string& ptkb_update_template();
const std::string& ptkb_select_template();

// Replaces each {{key}} with vars.at(key); unknown placeholders are an error.
std::string fill(std::string_view tmpl,
                 const std::map<std::string, std::string>& vars);

// Text of the "### task:" line, e.g. "rewrite" or "enhance QD".
std::string task_of(std::string_view prompt);

// Body of a bracketed section, trimmed; empty if the marker is absent.
std::string extract_section(std::string_view prompt, std::string_view marker);

// "User: <utterance>\nAssistant: <response>" per completed turn.
std::string serialize_history(std::span<const DialogueTurn> history);

// "<id>: <text>" per statement.
std::string serialize_ptkb(std::span<const PtkbStatement> ptkb);

}  // namespace prompts
}  // namespace convsearch
