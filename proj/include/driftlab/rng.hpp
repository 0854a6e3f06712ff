#pragma once

// Counter-based RNG built on splitmix64. Every consumer keys its own stream
// from (seed, tag, indices...), so draws are reproducible regardless of the
// order in which chunks or samples are materialized.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace drift::rng {

// splitmix64 avalanche
constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Fold key words into a single stream key.
constexpr uint64_t key(std::initializer_list<uint64_t> words) {
    uint64_t h = 0x2545f4914f6cdd1dULL;
    for (uint64_t w : words) h = mix64(h + 0x9e3779b97f4a7c15ULL + w);
    return h;
}

// Domain tags; distinct tags give independent streams from the same seed.
enum Tag : uint64_t {
    kClassMeans = 1,
    kLabel,
    kFeature,
    kNoise,
    kDriftDirection,
    kShuffle,
    kSubsample,
    kInit,
    kEval,
    kPhasePerm,
};

// splitmix64 stream seeded at `key`.
class Counter {
public:
    explicit Counter(uint64_t key) : state_(key) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // uniform in [0, 1)
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; two uniforms per draw, no caching
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    uint64_t below(uint64_t bound) { return next_u64() % bound; }

private:
    uint64_t state_;
};

// Seeded Fisher-Yates over indices [0, n).
inline std::vector<uint32_t> permutation(uint64_t key_, uint32_t n) {
    std::vector<uint32_t> idx(n);
    for (uint32_t i = 0; i < n; ++i) idx[i] = i;
    Counter c(key_);
    for (uint32_t i = n; i > 1; --i) {
        uint32_t j = uint32_t(c.below(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

} // namespace drift::rng
