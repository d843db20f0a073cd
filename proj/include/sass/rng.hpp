#pragma once

// Seeded randomness with portable derived distributions. The standard
// library's distribution objects are implementation-defined, so every draw
// here is built directly from the 64-bit engine output.

#include <cmath>
#include <cstdint>
#include <random>

namespace sass {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream key for (seed, a, b): mix64(mix64(mix64(seed) ^ a) ^ b).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return mix64(mix64(mix64(seed) ^ a) ^ b);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound); bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % bound;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Exponential with the given mean.
    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

private:
    std::mt19937_64 engine_;
};

}  // namespace sass
