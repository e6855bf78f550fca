#include <doctest.h>

#include "patchscout/tokenizer.hpp"

using namespace patchscout;

TEST_CASE("tokenize splits on whitespace and punctuation") {
    auto t = tokenize("foo.bar(x, y_2);");
    REQUIRE(t.size() == 4);
    CHECK(t[0] == "foo");
    CHECK(t[1] == "bar");
    CHECK(t[2] == "x");
    CHECK(t[3] == "y_2");
}

TEST_CASE("tokenize of empty and punctuation-only text") {
    CHECK(tokenize("").empty());
    CHECK(tokenize("(){};,.").empty());
    CHECK(count_tokens("   \n\t") == 0);
}

TEST_CASE("truncate_tokens keeps the first n tokens") {
    std::string text = "alpha beta gamma delta";
    CHECK(truncate_tokens(text, 2) == "alpha beta");
    CHECK(truncate_tokens(text, 4) == text);
    CHECK(truncate_tokens(text, 99) == text);
    CHECK(truncate_tokens(text, 0) == "");
    // punctuation after the cut token is dropped
    CHECK(truncate_tokens("a, b, c", 2) == "a, b");
}

TEST_CASE("truncation is idempotent and counts agree") {
    std::string text = "if (x == 1) { return foo(bar); }";
    for (size_t n : {0u, 1u, 3u, 5u, 100u}) {
        std::string cut = truncate_tokens(text, n);
        CHECK(count_tokens(cut) == std::min(n, count_tokens(text)));
        CHECK(truncate_tokens(cut, n) == cut);
    }
}

TEST_CASE("split_lines handles trailing newline and CR") {
    auto lines = split_lines("a\nb\n");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "a");
    CHECK(lines[1] == "b");

    auto no_trailing = split_lines("a\nb");
    REQUIRE(no_trailing.size() == 2);
    CHECK(no_trailing[1] == "b");

    auto crlf = split_lines("a\r\nb\r\n");
    REQUIRE(crlf.size() == 2);
    CHECK(crlf[0] == "a\r");

    CHECK(split_lines("").empty());
}
