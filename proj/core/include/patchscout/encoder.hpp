#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace patchscout {

// Anything that turns document text into a fixed-dimension feature vector.
// Implementations must be deterministic: the same text and configuration
// always produce the same vector, independent of what else was encoded.
class Encoder {
public:
    virtual ~Encoder() = default;
    virtual int dim() const = 0;
    virtual std::vector<double> encode(std::string_view text) const = 0;
};

// Hashed bag of token n-grams (orders 1..3). Each n-gram bumps one bucket
// chosen by a seeded 64-bit FNV-1a hash; the final vector is L2-normalized
// so document length does not dominate the dot product. An empty text maps
// to the zero vector, which stays unnormalized.
class HashedNgramEncoder : public Encoder {
public:
    explicit HashedNgramEncoder(int dim = 4096, uint64_t seed = 1);

    int dim() const override { return dim_; }
    std::vector<double> encode(std::string_view text) const override;

private:
    int dim_;
    uint64_t seed_;
};

} // namespace patchscout
