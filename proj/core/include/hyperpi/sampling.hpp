#pragma once

#include "hyperpi/specfn.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hyperpi {

/// Identifies an independent, reproducible random substream. Equal specs
/// reproduce identical draws; distinct (root_seed, stream) pairs map to
/// disjoint counter ranges of the underlying generator.
struct SeedSpec {
    std::uint64_t root_seed = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
///
/// The 64-bit key carries the root seed and the high counter words carry the
/// stream index, so every stream owns 2^64 blocks (2^65 draws) that no other
/// stream of the same root seed can touch. Advancing is just a counter
/// increment; there is no hidden state to warm up or jump over.
class PhiloxEngine {
public:
    explicit PhiloxEngine(SeedSpec seed) noexcept
        : key_{static_cast<std::uint32_t>(seed.root_seed),
               static_cast<std::uint32_t>(seed.root_seed >> 32)},
          counter_{0u, 0u, static_cast<std::uint32_t>(seed.stream),
                   static_cast<std::uint32_t>(seed.stream >> 32)} {}

    std::uint64_t next_u64() noexcept {
        if (word_ == 4) {
            block_ = keyed_block(counter_, key_);
            word_ = 0;
            if (++counter_[0] == 0) ++counter_[1];
        }
        const std::uint64_t lo = block_[word_];
        const std::uint64_t hi = block_[word_ + 1];
        word_ += 2;
        return lo | (hi << 32);
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [-1, 1).
    double next_symmetric() noexcept { return next_unit() * 2.0 - 1.0; }

    /// One keyed 10-round block; exposed for known-answer tests.
    static std::array<std::uint32_t, 4> keyed_block(
        std::array<std::uint32_t, 4> counter,
        std::array<std::uint32_t, 2> key) noexcept {
        for (int round = 0;; ++round) {
            const std::uint64_t product0 = 0xD2511F53ULL * counter[0];
            const std::uint64_t product1 = 0xCD9E8D57ULL * counter[2];
            counter = {
                static_cast<std::uint32_t>(product1 >> 32) ^ counter[1] ^ key[0],
                static_cast<std::uint32_t>(product1),
                static_cast<std::uint32_t>(product0 >> 32) ^ counter[3] ^ key[1],
                static_cast<std::uint32_t>(product0),
            };
            if (round == 9) break;
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return counter;
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    unsigned word_ = 4;
};

/// Tally of one sampling pass: how many of `trials` points of [-1,1]^d
/// landed inside the unit ball.
struct HitCount {
    Dimension d;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;

    friend bool operator==(const HitCount&, const HitCount&) = default;
};

/// Field-wise sum. Both operands must tally the same dimension.
HitCount merge(const HitCount& a, const HitCount& b);

/// Samples are laid out in fixed substreams of this many points: point n of a
/// request lives at offset n % width within stream (seed.stream + n / width).
/// Every counting routine walks the same layout, which is what makes results
/// a function of (seed, d, trials) alone, whatever the worker count.
inline constexpr std::uint64_t kSubstreamWidth = std::uint64_t{1} << 24;

/// Draws one point of [-1,1]^d, one coordinate per generator draw.
void sample_point(PhiloxEngine& gen, Dimension d, std::span<double> out);
std::vector<double> sample_point(PhiloxEngine& gen, Dimension d);

/// Sum of squared coordinates. Point must be non-empty.
double squared_norm(std::span<const double> point);

/// Counts points with squared norm <= 1 among `trials` samples.
/// chunk_size only tiles the inner loop; it never changes the result.
/// Throws std::invalid_argument for trials == 0 or chunk_size == 0.
HitCount count_hits(SeedSpec seed, Dimension d, std::uint64_t trials,
                    std::uint64_t chunk_size = std::uint64_t{1} << 14);

/// Same tally as count_hits, with whole substreams fanned out across up to
/// `workers` threads. The result is identical for every worker count.
HitCount parallel_count(SeedSpec seed, Dimension d, std::uint64_t trials,
                        unsigned workers);

}  // namespace hyperpi
