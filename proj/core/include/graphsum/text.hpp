#pragma once

#include <string>
#include <unordered_set>
#include <vector>

namespace graphsum::text {

// Lowercased whitespace split with punctuation detached. A '.', '\'' or '-'
// stays inside a token only when flanked by alphanumerics on both sides
// ("u.s", "firm's"); every other non-alphanumeric character becomes its own
// token. Deterministic; empty input yields an empty list.
std::vector<std::string> tokenize(const std::string& raw);

// True when the token contains no alphanumeric character.
bool is_punctuation(const std::string& token);

// Fixed English stopword list shipped in-repo (~180 entries).
const std::unordered_set<std::string>& stopwords();

bool is_stopword(const std::string& token);

}  // namespace graphsum::text
