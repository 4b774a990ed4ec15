#pragma once

#include <cstdint>
#include <random>

// Deterministic randomness helpers. All sampling flows from one root seed,
// split per stage and (where work is per-term) per term, so results do not
// depend on thread count or evaluation order. std::mt19937_64 has a fully
// specified output sequence; std::uniform_*_distribution does not, so raw
// engine words are mapped to values by hand.

namespace pyke::rng {

// SplitMix64 finalizer; good avalanche for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class Stage : std::uint64_t {
    Init = 1,
    Negatives = 2,
    Kmeans = 3,
    Sample = 4,
    Synth = 5,
};

constexpr std::uint64_t stage_seed(std::uint64_t root, Stage stage) noexcept {
    return mix64(root ^ (static_cast<std::uint64_t>(stage) * 0xd6e8feb86659fd93ULL));
}

constexpr std::uint64_t per_term_seed(std::uint64_t stage_seed, std::uint64_t term) noexcept {
    return mix64(stage_seed ^ mix64(term + 1));
}

// Uniform double in [0, 1) from one engine word.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform double in [-half_width, +half_width).
inline double uniform_symmetric(std::mt19937_64& gen, double half_width) {
    return half_width * (2.0 * uniform01(gen) - 1.0);
}

// Unbiased integer in [0, bound) via Lemire's multiply-shift rejection.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t bound) {
    while (true) {
        std::uint64_t x = gen();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo >= bound || lo >= (-bound) % bound) {
            return static_cast<std::uint64_t>(m >> 64);
        }
    }
}

}  // namespace pyke::rng
