#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pstomo::rng {

// All randomness in the project flows through mt19937_64 substreams seeded
// here. mt19937_64 and the samplers below use only integer arithmetic and
// arithmetic on uniform doubles, so results are bit-identical across
// platforms and independent of how work is scheduled across threads.
//
// Substream derivation: a stream is identified by up to three 64-bit tags
// (e.g. trial index, setting id). The tags are folded into the user seed
// with splitmix64 so that nearby seeds and tags give decorrelated streams.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (a + 0x517cc1b727220a95ULL));
    s = splitmix64(s ^ (b + 0x2545f4914f6cdd1dULL));
    s = splitmix64(s ^ (c + 0x9e3779b97f4a7c15ULL));
    return s;
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    return std::mt19937_64(derive_seed(seed, a, b, c));
}

/// Uniform double in [0,1), 53-bit resolution.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on raw uniforms. std::normal_distribution
/// is implementation-defined, so it is not used here.
double normal(std::mt19937_64& g);

/// Multinomial draw: `shots` independent categorical samples by inverse-CDF
/// lookup. `probs` must be nonnegative (entries below -1e-12 are an error)
/// and sum to 1 within 1e-9.
std::vector<std::int64_t> multinomial(const std::vector<double>& probs,
                                      std::int64_t shots, std::mt19937_64& g);

}  // namespace pstomo::rng
