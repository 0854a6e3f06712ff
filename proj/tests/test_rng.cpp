#include "doctest.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "driftlab/rng.hpp"

using namespace drift;

TEST_CASE("counter streams are reproducible and key-separated") {
    rng::Counter a(rng::key({42, rng::kFeature, 3, 7}));
    rng::Counter b(rng::key({42, rng::kFeature, 3, 7}));
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    rng::Counter c(rng::key({42, rng::kFeature, 3, 8}));
    rng::Counter d(rng::key({42, rng::kLabel, 3, 7}));
    rng::Counter e(rng::key({43, rng::kFeature, 3, 7}));
    rng::Counter f(rng::key({42, rng::kFeature, 3, 7}));
    int diff_c = 0, diff_d = 0, diff_e = 0;
    for (int i = 0; i < 64; ++i) {
        uint64_t ref = f.next_u64();
        diff_c += (c.next_u64() != ref);
        diff_d += (d.next_u64() != ref);
        diff_e += (e.next_u64() != ref);
    }
    CHECK(diff_c == 64);
    CHECK(diff_d == 64);
    CHECK(diff_e == 64);
}

TEST_CASE("single-bit key changes avalanche through the mixer") {
    for (uint64_t bit = 0; bit < 64; bit += 7) {
        uint64_t x = rng::mix64(0x123456789abcdef0ULL);
        uint64_t y = rng::mix64(0x123456789abcdef0ULL ^ (1ULL << bit));
        CHECK(std::popcount(x ^ y) > 10);
    }
}

TEST_CASE("uniform draws live in [0,1) with a sane mean") {
    rng::Counter gen(rng::key({1, rng::kEval}));
    double sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double u = gen.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.02);
}

TEST_CASE("gaussian draws have unit-ish moments") {
    rng::Counter gen(rng::key({2, rng::kNoise}));
    double sum = 0.0, sum_sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double g = gen.gaussian();
        sum += g;
        sum_sq += g * g;
    }
    double mean = sum / n;
    double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(var - 1.0) < 0.1);
}

TEST_CASE("below stays in range") {
    rng::Counter gen(rng::key({3, rng::kSubsample}));
    for (int i = 0; i < 1000; ++i) CHECK(gen.below(10) < 10);
}

TEST_CASE("permutation is a deterministic bijection") {
    auto p1 = rng::permutation(rng::key({9, rng::kShuffle, 0}), 257);
    auto p2 = rng::permutation(rng::key({9, rng::kShuffle, 0}), 257);
    CHECK(p1 == p2);

    std::vector<bool> seen(257, false);
    for (uint32_t v : p1) {
        REQUIRE(v < 257);
        CHECK(!seen[v]);
        seen[v] = true;
    }

    auto p3 = rng::permutation(rng::key({9, rng::kShuffle, 1}), 257);
    CHECK(p1 != p3);
}
