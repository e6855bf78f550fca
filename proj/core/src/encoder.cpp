#include "patchscout/encoder.hpp"

#include <cmath>

#include "patchscout/tokenizer.hpp"

namespace patchscout {

namespace {

constexpr uint64_t kFnvOffset = 14695981039346656037ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

uint64_t fnv1a_init(uint64_t seed) {
    uint64_t h = kFnvOffset;
    for (int i = 0; i < 8; ++i) {
        h ^= (seed >> (8 * i)) & 0xffu;
        h *= kFnvPrime;
    }
    return h;
}

uint64_t fnv1a_feed(uint64_t h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    // Unit separator between tokens so ("ab","c") and ("a","bc") differ.
    h ^= 0x1fu;
    h *= kFnvPrime;
    return h;
}

} // namespace

HashedNgramEncoder::HashedNgramEncoder(int dim, uint64_t seed)
    : dim_(dim), seed_(seed) {}

std::vector<double> HashedNgramEncoder::encode(std::string_view text) const {
    std::vector<double> features(static_cast<size_t>(dim_), 0.0);
    std::vector<std::string> tokens = tokenize(text);
    const uint64_t base = fnv1a_init(seed_);
    for (size_t i = 0; i < tokens.size(); ++i) {
        uint64_t h = base;
        for (size_t order = 0; order < 3 && i + order < tokens.size(); ++order) {
            h = fnv1a_feed(h, tokens[i + order]);
            features[h % static_cast<uint64_t>(dim_)] += 1.0;
        }
    }
    double norm2 = 0.0;
    for (double f : features) norm2 += f * f;
    if (norm2 > 0.0) {
        double inv = 1.0 / std::sqrt(norm2);
        for (double& f : features) f *= inv;
    }
    return features;
}

} // namespace patchscout
