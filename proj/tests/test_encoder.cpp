#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "patchscout/encoder.hpp"

using namespace patchscout;

namespace {

double l2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace

TEST_CASE("encoding is deterministic across calls and instances") {
    HashedNgramEncoder a(512, 7);
    HashedNgramEncoder b(512, 7);
    std::string text = "if (ready) { sink.emit(payload); }";
    CHECK(a.encode(text) == a.encode(text));
    CHECK(a.encode(text) == b.encode(text));
}

TEST_CASE("encoding one document ignores what else was encoded") {
    HashedNgramEncoder enc(256, 3);
    auto before = enc.encode("alpha beta gamma");
    enc.encode("unrelated corpus entry one");
    enc.encode("another unrelated entry");
    enc.encode("");
    CHECK(enc.encode("alpha beta gamma") == before);
}

TEST_CASE("vectors are unit length except for tokenless text") {
    HashedNgramEncoder enc(128, 1);
    CHECK(l2(enc.encode("return x + y;")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l2(enc.encode("single")) == doctest::Approx(1.0).epsilon(1e-12));

    auto zero = enc.encode("");
    CHECK(l2(zero) == 0.0);
    CHECK(zero.size() == 128);
    CHECK(l2(enc.encode("+-*/ (){};")) == 0.0);
}

TEST_CASE("repeated tokens accumulate counts before normalization") {
    HashedNgramEncoder enc(4096, 1);
    auto v = enc.encode("a a a");
    std::vector<double> nonzero;
    for (double x : v) {
        if (x != 0.0) nonzero.push_back(x);
    }
    // Grams: "a" three times, "a a" twice, "a a a" once, in three distinct
    // buckets at this dimension and seed.
    REQUIRE(nonzero.size() == 3);
    std::sort(nonzero.begin(), nonzero.end());
    double norm = std::sqrt(9.0 + 4.0 + 1.0);
    CHECK(nonzero[0] == doctest::Approx(1.0 / norm).epsilon(1e-12));
    CHECK(nonzero[1] == doctest::Approx(2.0 / norm).epsilon(1e-12));
    CHECK(nonzero[2] == doctest::Approx(3.0 / norm).epsilon(1e-12));
}

TEST_CASE("token order changes the encoding") {
    HashedNgramEncoder enc(1024, 1);
    CHECK(enc.encode("load store") != enc.encode("store load"));
}

TEST_CASE("gram boundaries do not collapse across tokens") {
    HashedNgramEncoder enc(1024, 1);
    CHECK(enc.encode("x yz") != enc.encode("xy z"));
}

TEST_CASE("seed changes the hash layout") {
    HashedNgramEncoder a(1024, 1);
    HashedNgramEncoder b(1024, 2);
    CHECK(a.encode("same input text") != b.encode("same input text"));
}

TEST_CASE("dimension bounds the vector") {
    HashedNgramEncoder enc(16, 1);
    auto v = enc.encode("many distinct tokens crammed into few buckets here");
    CHECK(v.size() == 16);
    CHECK(enc.dim() == 16);
}
