#include "patchscout/tokenizer.hpp"

namespace patchscout {

namespace {

inline bool is_word_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
}

} // namespace

std::vector<TokenSpan> token_spans(std::string_view text) {
    std::vector<TokenSpan> spans;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        if (!is_word_char(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        size_t begin = i;
        while (i < n && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
        spans.push_back({begin, i});
    }
    return spans;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    for (const TokenSpan& s : token_spans(text)) {
        out.emplace_back(text.substr(s.begin, s.end - s.begin));
    }
    return out;
}

size_t count_tokens(std::string_view text) {
    return token_spans(text).size();
}

std::string truncate_tokens(std::string_view text, size_t max_tokens) {
    std::vector<TokenSpan> spans = token_spans(text);
    if (spans.size() <= max_tokens) return std::string(text);
    if (max_tokens == 0) return std::string();
    return std::string(text.substr(0, spans[max_tokens - 1].end));
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    size_t start = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            lines.emplace_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    if (start < text.size()) lines.emplace_back(text.substr(start));
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    size_t total = 0;
    for (const auto& l : lines) total += l.size() + 1;
    out.reserve(total);
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

} // namespace patchscout
