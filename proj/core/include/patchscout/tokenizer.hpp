#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace patchscout {

// Word tokenization used everywhere a token budget or token count appears.
// A token is a maximal run of [A-Za-z0-9_]; every other byte is a separator.
// This is deliberately simple: budgets must be reproducible across machines
// and independent of any model vocabulary.

struct TokenSpan {
    size_t begin = 0; // byte offset of first char
    size_t end = 0;   // one past last char
};

std::vector<TokenSpan> token_spans(std::string_view text);

std::vector<std::string> tokenize(std::string_view text);

size_t count_tokens(std::string_view text);

// Cuts `text` at the end of the max_tokens-th token. Text with fewer tokens
// comes back unchanged. The tail after the last kept token is dropped.
std::string truncate_tokens(std::string_view text, size_t max_tokens);

// Splits into lines on '\n'. A trailing newline does not produce a final
// empty line; "\r" stays attached to its line so byte content round-trips.
std::vector<std::string> split_lines(std::string_view text);

std::string join_lines(const std::vector<std::string>& lines);

} // namespace patchscout
