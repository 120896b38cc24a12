// Counter-based splittable random stream.
//
// Draw i of a stream with key k is mix64(k + (i + 1) * gamma), the SplitMix64
// output function applied to a Weyl sequence. Any draw can be computed
// directly from its index, so a trial range can be split across threads
// without changing the results.
#pragma once

#include <cstdint>

namespace qaffine {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class RandomStream {
public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    explicit RandomStream(std::uint64_t seed) noexcept : seed_(seed), key_(mix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

    /// Independent child stream; same (seed, index) always gives the same child.
    RandomStream split(std::uint64_t index) const noexcept {
        RandomStream child(seed_);
        child.key_ = mix64(key_ ^ mix64(index + kGamma));
        return child;
    }

    /// Raw 64-bit draw at an absolute position; does not advance.
    std::uint64_t bits_at(std::uint64_t position) const noexcept {
        return mix64(key_ + (position + 1) * kGamma);
    }
    /// Uniform double in [0, 1) with 53 random bits at an absolute position.
    double uniform_at(std::uint64_t position) const noexcept {
        return static_cast<double>(bits_at(position) >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_bits() noexcept { return bits_at(counter_++); }
    double next_uniform() noexcept { return uniform_at(counter_++); }

    void seek(std::uint64_t position) noexcept { counter_ = position; }

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace qaffine
