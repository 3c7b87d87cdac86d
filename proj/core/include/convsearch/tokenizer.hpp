#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace convsearch {

// Minimal lossless tokenizer: lowercases ASCII letters, splits on any
// non-alphanumeric codepoint, drops empty tokens. No stemming, no stopwords.
// Bytes >= 0x80 (multibyte UTF-8) are kept verbatim inside tokens.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace convsearch
