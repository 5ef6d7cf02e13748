#pragma once

#include <cstdint>
#include <vector>

namespace coherent {

/// Small counter-based random number generator (splitmix64 over a Weyl
/// sequence). Each (seed, stream) pair yields an independent stream, so
/// parallel consumers produce identical results regardless of execution
/// order.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed + 0x9e3779b97f4a7c15ull * (stream + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // rejection sampling to avoid modulo bias
        const std::uint64_t limit = n * ((~0ull) / n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    /// Sample an index from unnormalized nonnegative weights.
    std::size_t sample_discrete(const std::vector<double>& weights, double total) {
        double u = next_double() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

} // namespace coherent
