#pragma once

#include <cstdint>

namespace natsal {

// 64-bit mixing function used to derive independent child streams
// (e.g. one per frame) from a base seed. SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// SplitMix64 generator. Small state, deterministic across platforms,
// good enough statistically for Monte-Carlo work at this scale.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) { return u64() % n; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Child stream for a given index; independent of call order at the parent.
    static Rng child(std::uint64_t base_seed, std::uint64_t stream_index) {
        return Rng(mix64(base_seed, stream_index));
    }

private:
    std::uint64_t state_;
};

// Stream tags keep unrelated consumers of the same base seed decorrelated.
inline constexpr std::uint64_t kStreamTruth = 0x74727574;
inline constexpr std::uint64_t kStreamFixations = 0x66697873;
inline constexpr std::uint64_t kStreamStats = 0x73746174;
inline constexpr std::uint64_t kStreamEval = 0x6576616c;
inline constexpr std::uint64_t kStreamPerturb = 0x70657274;

} // namespace natsal
