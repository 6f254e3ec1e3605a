#include "hyperpi/sampling.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>

namespace hyperpi {
namespace {

// Hits within one substream: `count` consecutive points drawn from the given
// stream index, d coordinates consumed per point with no early exit, so the
// draw position of every point is fixed regardless of outcomes.
std::uint64_t count_in_substream(SeedSpec seed, unsigned d,
                                 std::uint64_t count) {
    PhiloxEngine gen(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        double squared = 0.0;
        for (unsigned k = 0; k < d; ++k) {
            const double x = gen.next_symmetric();
            squared += x * x;
        }
        hits += squared <= 1.0 ? 1 : 0;
    }
    return hits;
}

struct SubstreamRange {
    std::uint64_t first_index = 0;  // substream index relative to seed.stream
    std::uint64_t full = 0;         // whole substreams starting there
    std::uint64_t tail_count = 0;   // points in a trailing partial substream
};

std::uint64_t count_range(SeedSpec seed, unsigned d, const SubstreamRange& r) {
    std::uint64_t hits = 0;
    std::uint64_t index = r.first_index;
    for (std::uint64_t i = 0; i < r.full; ++i, ++index) {
        hits += count_in_substream({seed.root_seed, seed.stream + index}, d,
                                   kSubstreamWidth);
    }
    if (r.tail_count > 0) {
        hits += count_in_substream({seed.root_seed, seed.stream + index}, d,
                                   r.tail_count);
    }
    return hits;
}

}  // namespace

HitCount merge(const HitCount& a, const HitCount& b) {
    if (a.d != b.d) {
        throw std::invalid_argument(
            "merge: hit counts tally different dimensions (" +
            std::to_string(a.d.value()) + " vs " + std::to_string(b.d.value()) +
            ")");
    }
    return HitCount{a.d, a.trials + b.trials, a.hits + b.hits};
}

void sample_point(PhiloxEngine& gen, Dimension d, std::span<double> out) {
    if (out.size() != d.value()) {
        throw std::invalid_argument(
            "sample_point: output span must hold exactly d coordinates");
    }
    for (double& x : out) x = gen.next_symmetric();
}

std::vector<double> sample_point(PhiloxEngine& gen, Dimension d) {
    std::vector<double> point(d.value());
    sample_point(gen, d, point);
    return point;
}

double squared_norm(std::span<const double> point) {
    if (point.empty()) {
        throw std::invalid_argument("squared_norm: point has no coordinates");
    }
    double squared = 0.0;
    for (const double x : point) squared += x * x;
    return squared;
}

HitCount count_hits(SeedSpec seed, Dimension d, std::uint64_t trials,
                    std::uint64_t chunk_size) {
    if (trials == 0) {
        throw std::invalid_argument("count_hits: trials must be at least 1");
    }
    if (chunk_size == 0) {
        throw std::invalid_argument("count_hits: chunk_size must be at least 1");
    }
    std::uint64_t hits = 0;
    std::uint64_t done = 0;
    std::uint64_t substream = 0;
    while (done < trials) {
        const std::uint64_t in_stream =
            std::min(kSubstreamWidth, trials - done);
        const SeedSpec sub{seed.root_seed, seed.stream + substream};
        PhiloxEngine gen(sub);
        // chunk_size tiles this loop for callers that want periodic
        // interruption points; the generator runs straight through.
        std::uint64_t remaining = in_stream;
        while (remaining > 0) {
            const std::uint64_t chunk = std::min(chunk_size, remaining);
            for (std::uint64_t i = 0; i < chunk; ++i) {
                double squared = 0.0;
                for (unsigned k = 0; k < d.value(); ++k) {
                    const double x = gen.next_symmetric();
                    squared += x * x;
                }
                hits += squared <= 1.0 ? 1 : 0;
            }
            remaining -= chunk;
        }
        done += in_stream;
        ++substream;
    }
    return HitCount{d, trials, hits};
}

HitCount parallel_count(SeedSpec seed, Dimension d, std::uint64_t trials,
                        unsigned workers) {
    if (trials == 0) {
        throw std::invalid_argument("parallel_count: trials must be at least 1");
    }
    if (workers == 0) {
        throw std::invalid_argument(
            "parallel_count: worker count must be at least 1");
    }
    const std::uint64_t substreams =
        (trials + kSubstreamWidth - 1) / kSubstreamWidth;
    const std::uint64_t tasks =
        std::min<std::uint64_t>(workers, substreams);
    if (tasks <= 1) return count_hits(seed, d, trials);

    // Deal whole substreams out block-wise; the partial tail substream, if
    // any, belongs to the last task.
    const std::uint64_t tail = trials % kSubstreamWidth;
    const std::uint64_t full = substreams - (tail > 0 ? 1 : 0);
    std::vector<SubstreamRange> ranges(tasks);
    std::uint64_t next_index = 0;
    for (std::uint64_t t = 0; t < tasks; ++t) {
        const std::uint64_t share = full / tasks + (t < full % tasks ? 1 : 0);
        ranges[t].first_index = next_index;
        ranges[t].full = share;
        next_index += share;
    }
    if (tail > 0) ranges[tasks - 1].tail_count = tail;

    std::vector<std::future<std::uint64_t>> futures;
    futures.reserve(tasks - 1);
    for (std::uint64_t t = 1; t < tasks; ++t) {
        futures.push_back(std::async(std::launch::async, count_range, seed,
                                     d.value(), ranges[t]));
    }
    std::uint64_t hits = count_range(seed, d.value(), ranges[0]);
    for (auto& f : futures) hits += f.get();
    return HitCount{d, trials, hits};
}

}  // namespace hyperpi
