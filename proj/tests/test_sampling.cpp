#include "hyperpi/sampling.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"

using namespace hyperpi;

TEST_CASE("keyed block reproduces the published Philox4x32-10 vectors") {
    // Known-answer vectors from the Random123 reference distribution.
    CHECK(PhiloxEngine::keyed_block({0u, 0u, 0u, 0u}, {0u, 0u}) ==
          std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu,
                                       0x9b00dbd8u});
    CHECK(PhiloxEngine::keyed_block({0xffffffffu, 0xffffffffu, 0xffffffffu,
                                     0xffffffffu},
                                    {0xffffffffu, 0xffffffffu}) ==
          std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u,
                                       0x6d5451fdu});
    CHECK(PhiloxEngine::keyed_block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu,
                                     0x03707344u},
                                    {0xa4093822u, 0x299f31d0u}) ==
          std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u,
                                       0x24126ea1u});
}

TEST_CASE("engine draws are the keyed blocks of consecutive counters") {
    const SeedSpec seed{0x0123456789abcdefULL, 0xfedcba9876543210ULL};
    PhiloxEngine gen(seed);
    const std::array<std::uint32_t, 2> key{0x89abcdefu, 0x01234567u};
    const auto block0 = PhiloxEngine::keyed_block(
        {0u, 0u, 0x76543210u, 0xfedcba98u}, key);
    const auto block1 = PhiloxEngine::keyed_block(
        {1u, 0u, 0x76543210u, 0xfedcba98u}, key);
    CHECK(gen.next_u64() ==
          (static_cast<std::uint64_t>(block0[1]) << 32 | block0[0]));
    CHECK(gen.next_u64() ==
          (static_cast<std::uint64_t>(block0[3]) << 32 | block0[2]));
    CHECK(gen.next_u64() ==
          (static_cast<std::uint64_t>(block1[1]) << 32 | block1[0]));
}

TEST_CASE("equal seeds reproduce, different seeds diverge") {
    const SeedSpec seed{42, 7};
    PhiloxEngine a(seed);
    PhiloxEngine b(seed);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());

    PhiloxEngine other_stream({42, 8});
    PhiloxEngine other_root({43, 7});
    PhiloxEngine base(seed);
    bool stream_differs = false;
    bool root_differs = false;
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t v = base.next_u64();
        stream_differs |= v != other_stream.next_u64();
        root_differs |= v != other_root.next_u64();
    }
    CHECK(stream_differs);
    CHECK(root_differs);
}

TEST_CASE("unit and symmetric draws stay in range") {
    PhiloxEngine gen({1, 0});
    for (int i = 0; i < 100000; ++i) {
        const double u = gen.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    PhiloxEngine gen2({1, 1});
    for (int i = 0; i < 100000; ++i) {
        const double x = gen2.next_symmetric();
        CHECK(x >= -1.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("unit draws have uniform moments") {
    // 10^6 draws; bands are +-3.89 standard errors (alpha ~ 1e-4), checked
    // once against this fixed seed and frozen.
    PhiloxEngine gen({2024, 0});
    const int n = 1000000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = gen.next_unit();
        sum += u;
        sum_sq += u * u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.0011231195);
    CHECK(std::abs(sum_sq / n - 1.0 / 3.0) < 0.0011599528);
}

TEST_CASE("sample_point fills exactly d coordinates in order") {
    const SeedSpec seed{9, 3};
    PhiloxEngine gen(seed);
    const std::vector<double> point = sample_point(gen, Dimension(5));
    REQUIRE(point.size() == 5);
    for (const double x : point) {
        CHECK(x >= -1.0);
        CHECK(x < 1.0);
    }

    // The same engine state yields the same coordinates through either
    // overload, and points consume draws back to back.
    PhiloxEngine replay(seed);
    std::array<double, 5> buffer{};
    sample_point(replay, Dimension(5), buffer);
    for (int i = 0; i < 5; ++i) CHECK(buffer[i] == point[i]);

    PhiloxEngine raw(seed);
    PhiloxEngine paired(seed);
    for (int p = 0; p < 3; ++p) {
        const std::vector<double> pt = sample_point(paired, Dimension(2));
        CHECK(pt[0] == raw.next_symmetric());
        CHECK(pt[1] == raw.next_symmetric());
    }

    PhiloxEngine sized(seed);
    std::array<double, 4> wrong{};
    CHECK_THROWS_AS(sample_point(sized, Dimension(5), wrong),
                    std::invalid_argument);
}

TEST_CASE("squared_norm sums squares and rejects empty points") {
    const std::vector<double> point{0.3, -0.4};
    CHECK(squared_norm(point) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(squared_norm(std::vector<double>{1.0}) == 1.0);
    CHECK_THROWS_AS(squared_norm(std::vector<double>{}),
                    std::invalid_argument);
}

TEST_CASE("merge adds tallies of the same dimension") {
    const HitCount a{Dimension(3), 100, 52};
    const HitCount b{Dimension(3), 50, 27};
    const HitCount sum = merge(a, b);
    CHECK(sum.d == Dimension(3));
    CHECK(sum.trials == 150);
    CHECK(sum.hits == 79);
    CHECK_THROWS_AS(merge(a, HitCount{Dimension(4), 10, 1}),
                    std::invalid_argument);
}

TEST_CASE("count_hits validates its inputs") {
    CHECK_THROWS_AS(count_hits({0, 0}, Dimension(2), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(count_hits({0, 0}, Dimension(2), 10, 0),
                    std::invalid_argument);
}

TEST_CASE("every 1-D point hits") {
    const HitCount tally = count_hits({11, 0}, Dimension(1), 5000);
    CHECK(tally.hits == tally.trials);
}

TEST_CASE("chunk size never changes the tally") {
    const SeedSpec seed{77, 5};
    const HitCount reference = count_hits(seed, Dimension(3), 10000);
    for (const std::uint64_t chunk : {1ull, 7ull, 1000ull, 16384ull, 1ull << 40}) {
        CHECK(count_hits(seed, Dimension(3), 10000, chunk) == reference);
    }
}

TEST_CASE("hit rates match the analytic probability") {
    // z = (hits - nP) / sqrt(nP(1-P)) bounded by 3.8906 (alpha ~ 1e-4);
    // verified once for this seed and frozen.
    struct Case {
        unsigned d;
        double p;
    };
    const Case cases[] = {{2, 0.78539816339744831}, {5, 0.16449340668482264}};
    const std::uint64_t n = 1000000;
    for (const Case& c : cases) {
        const HitCount tally = count_hits({314159, c.d}, Dimension(c.d), n);
        const double expected = static_cast<double>(n) * c.p;
        const double sigma = std::sqrt(expected * (1.0 - c.p));
        const double z =
            (static_cast<double>(tally.hits) - expected) / sigma;
        CHECK(std::abs(z) < 3.8906);
    }
}

TEST_CASE("hits grow sparser with dimension") {
    const std::uint64_t n = 100000;
    const std::uint64_t h2 = count_hits({5, 0}, Dimension(2), n).hits;
    const std::uint64_t h5 = count_hits({5, 0}, Dimension(5), n).hits;
    const std::uint64_t h10 = count_hits({5, 0}, Dimension(10), n).hits;
    CHECK(h2 > h5);
    CHECK(h5 > h10);
}

TEST_CASE("requests decompose into fixed-width substreams") {
    // Point n lives at offset n % 2^24 of stream base + n / 2^24, so one
    // request must equal the merge of its per-substream pieces.
    const SeedSpec seed{123, 400};
    const std::uint64_t tail = 4097;
    const std::uint64_t n = kSubstreamWidth + tail;
    const HitCount whole = count_hits(seed, Dimension(2), n);
    const HitCount head = count_hits(seed, Dimension(2), kSubstreamWidth);
    const HitCount rest =
        count_hits({seed.root_seed, seed.stream + 1}, Dimension(2), tail);
    CHECK(whole == merge(head, rest));
}

TEST_CASE("parallel_count is worker-count invariant") {
    const SeedSpec seed{2718, 9};
    const std::uint64_t n = 2 * kSubstreamWidth + 12345;
    const HitCount reference = count_hits(seed, Dimension(2), n);
    for (const unsigned workers : {1u, 2u, 3u, 8u}) {
        CHECK(parallel_count(seed, Dimension(2), n, workers) == reference);
    }
    CHECK_THROWS_AS(parallel_count(seed, Dimension(2), n, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(parallel_count(seed, Dimension(2), 0, 2),
                    std::invalid_argument);
}
