#pragma once

#include <cstdint>
#include <random>

namespace multicascade::rng {

// Finalizer from splitmix64 (Vigna); full avalanche over one 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive a child stream seed from a parent seed and up to three key words.
// Every consumer of randomness owns a stream keyed by (seed, purpose tag,
// indices); streams are never shared, so adding consumers or reordering
// work cannot perturb unrelated draws.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t k0,
                            std::uint64_t k1 = 0, std::uint64_t k2 = 0) {
    std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (k0 + 0xd1b54a32d192ed03ULL));
    h = mix64(h ^ (k1 + 0x8cb92ba72f3d8dd7ULL));
    h = mix64(h ^ (k2 + 0xaef17502108ef2d9ULL));
    return h;
}

// Stream purpose tags.
inline constexpr std::uint64_t kTagLayer = 0x6c61796572ULL;      // graph layer
inline constexpr std::uint64_t kTagSeeds = 0x7365656473ULL;      // seed selection
inline constexpr std::uint64_t kTagRun = 0x72756eULL;            // diffusion run
inline constexpr std::uint64_t kTagRuleLayer = 0x7069636bULL;    // random-rule layer pick
inline constexpr std::uint64_t kTagItem = 0x6974656dULL;         // sweep work item
inline constexpr std::uint64_t kTagNet = 0x6e6574ULL;            // network of a work item

// Map a uniform 64-bit word to [0, n) without rounding bias worth caring
// about (error is O(n / 2^64)).
inline std::uint32_t bounded(std::uint64_t word, std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(word) * n) >> 64);
}

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is pinned by the standard; float/int conversions below are done
// by hand so results are bit-identical across platforms and library
// implementations.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_word() { return eng_(); }

    // Uniform double in [0, 1); 53 random bits, never returns 1.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, n), n >= 1. Lemire multiply-shift with
    // rejection; exact-uniform.
    std::uint32_t below(std::uint32_t n) {
        std::uint64_t x = eng_();
        auto m = static_cast<unsigned __int128>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t t = (0 - static_cast<std::uint64_t>(n)) % n;
            while (lo < t) {
                x = eng_();
                m = static_cast<unsigned __int128>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 64);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace multicascade::rng
