#include "hyperpi/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

namespace hyperpi {
namespace {

using nlohmann::json;

constexpr unsigned kAdaptiveRunCount = 5;

std::vector<ScheduleRow> repeat_five(std::initializer_list<std::uint64_t> sizes) {
    std::vector<ScheduleRow> rows;
    rows.reserve(sizes.size());
    for (const std::uint64_t size : sizes) rows.push_back({size, 5});
    return rows;
}

// splitmix64 finalizer; full-avalanche mix used to spread cell coordinates
// over the stream space.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t positive_integer(const json& value, const std::string& what) {
    if (value.is_number_unsigned()) {
        const std::uint64_t x = value.get<std::uint64_t>();
        if (x >= 1) return x;
    } else if (value.is_number_integer()) {
        const std::int64_t x = value.get<std::int64_t>();
        if (x >= 1) return static_cast<std::uint64_t>(x);
    }
    throw PlanParseError(what + " must be a positive integer");
}

unsigned parse_dimension_value(const json& value, const std::string& what) {
    const std::uint64_t x = positive_integer(value, what);
    if (x > std::numeric_limits<unsigned>::max()) {
        throw PlanParseError(what + " is out of range");
    }
    return static_cast<unsigned>(x);
}

void validate_plan(const ExperimentPlan& plan) {
    if (plan.dimensions.empty()) {
        throw PlanParseError("plan lists no dimensions");
    }
    if (plan.workers == 0) {
        throw PlanParseError("plan workers must be at least 1");
    }
    if (plan.adaptive_target &&
        !(*plan.adaptive_target > 0.0 && *plan.adaptive_target < 1.0)) {
        throw PlanParseError("adaptive_target must lie in (0, 1)");
    }
    std::set<unsigned> seen;
    for (const unsigned d : plan.dimensions) {
        if (d == 0) throw PlanParseError("dimension 0 is not valid");
        if (!seen.insert(d).second) {
            throw PlanParseError("dimension " + std::to_string(d) +
                                 " appears twice in the plan");
        }
    }
    for (const auto& [d, rows] : plan.schedule) {
        if (d == 0) throw PlanParseError("schedule keyed by dimension 0");
        if (rows.empty()) {
            throw PlanParseError("schedule for dimension " + std::to_string(d) +
                                 " has no rows");
        }
        for (const ScheduleRow& row : rows) {
            if (row.sample_size == 0 || row.run_count == 0) {
                throw PlanParseError("schedule for dimension " +
                                     std::to_string(d) +
                                     " has a zero sample size or run count");
            }
        }
    }
    // Resolving rows here surfaces a missing schedule (d > 20 with neither an
    // explicit entry nor an adaptive target) before any sampling starts.
    for (const unsigned d : plan.dimensions) {
        (void)plan.rows_for(Dimension(d));
    }
}

struct Cell {
    std::size_t flat_index = 0;
    unsigned dimension = 0;
    std::size_t size_index = 0;
    unsigned run_index = 0;
    std::uint64_t sample_size = 0;
};

struct CellOutcome {
    RunRecord record;
    std::optional<PiEstimate> estimate;
    std::string failure;  // non-empty when the cell failed outright
};

}  // namespace

std::vector<ScheduleRow> default_schedule(Dimension d) {
    const unsigned v = d.value();
    if (v <= 7) return repeat_five({1'000, 5'000, 10'000});
    if (v == 8) return repeat_five({1'000, 5'000, 10'000, 50'000, 100'000});
    if (v == 9 || v == 10 || v == 13) {
        return repeat_five({10'000, 50'000, 100'000});
    }
    if (v == 11) {
        return repeat_five({10'000, 50'000, 100'000, 500'000, 1'000'000});
    }
    if (v == 12 || v == 14) return repeat_five({100'000, 500'000, 1'000'000});
    if (v == 15) return repeat_five({1'000'000, 5'000'000, 10'000'000});
    if (v <= 19) {
        return {{10'000'000, 5}, {50'000'000, 5}, {100'000'000, 2}};
    }
    if (v == 20) {
        return {{25'000'000, 5}, {50'000'000, 5}, {100'000'000, 2}};
    }
    throw ScheduleError(
        "no built-in schedule for dimension " + std::to_string(v) +
        "; supply an explicit schedule or an adaptive target beyond d = 20");
}

std::vector<ScheduleRow> ExperimentPlan::rows_for(Dimension d) const {
    if (const auto it = schedule.find(d.value()); it != schedule.end()) {
        return it->second;
    }
    if (adaptive_target) {
        return {ScheduleRow{required_samples(d, *adaptive_target),
                            kAdaptiveRunCount}};
    }
    return default_schedule(d);
}

ExperimentPlan plan_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw PlanParseError(std::string("plan is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw PlanParseError("plan must be a JSON object");
    static const std::set<std::string> known = {
        "dimensions", "schedule", "root_seed", "workers", "adaptive_target"};
    for (const auto& item : doc.items()) {
        if (!known.count(item.key())) {
            throw PlanParseError("unknown plan field \"" + item.key() + "\"");
        }
    }

    ExperimentPlan plan;
    if (!doc.contains("dimensions")) {
        throw PlanParseError("plan is missing \"dimensions\"");
    }
    const json& dims = doc["dimensions"];
    if (!dims.is_array() || dims.empty()) {
        throw PlanParseError("\"dimensions\" must be a non-empty array");
    }
    for (const json& v : dims) {
        plan.dimensions.push_back(parse_dimension_value(v, "dimension"));
    }

    if (doc.contains("schedule")) {
        const json& sched = doc["schedule"];
        if (sched.is_string()) {
            if (sched.get<std::string>() != "default") {
                throw PlanParseError(
                    "\"schedule\" must be \"default\" or an object, got \"" +
                    sched.get<std::string>() + "\"");
            }
        } else if (sched.is_object()) {
            for (const auto& item : sched.items()) {
                unsigned dim = 0;
                try {
                    std::size_t consumed = 0;
                    const unsigned long parsed =
                        std::stoul(item.key(), &consumed);
                    if (consumed != item.key().size() || parsed == 0 ||
                        parsed > std::numeric_limits<unsigned>::max()) {
                        throw std::invalid_argument(item.key());
                    }
                    dim = static_cast<unsigned>(parsed);
                } catch (const std::exception&) {
                    throw PlanParseError("schedule key \"" + item.key() +
                                         "\" is not a dimension");
                }
                const json& rows = item.value();
                if (!rows.is_array() || rows.empty()) {
                    throw PlanParseError("schedule for dimension " +
                                         item.key() +
                                         " must be a non-empty array");
                }
                std::vector<ScheduleRow> out;
                for (const json& row : rows) {
                    if (!row.is_array() || row.size() != 2) {
                        throw PlanParseError(
                            "schedule rows are [sample_size, run_count] pairs");
                    }
                    const std::uint64_t size =
                        positive_integer(row[0], "sample_size");
                    const std::uint64_t runs =
                        positive_integer(row[1], "run_count");
                    if (runs > std::numeric_limits<unsigned>::max()) {
                        throw PlanParseError("run_count is out of range");
                    }
                    out.push_back({size, static_cast<unsigned>(runs)});
                }
                plan.schedule[dim] = std::move(out);
            }
        } else {
            throw PlanParseError("\"schedule\" must be \"default\" or an object");
        }
    }

    if (doc.contains("root_seed")) {
        const json& seed = doc["root_seed"];
        if (seed.is_number_unsigned()) {
            plan.root_seed = seed.get<std::uint64_t>();
        } else if (seed.is_number_integer() && seed.get<std::int64_t>() >= 0) {
            plan.root_seed =
                static_cast<std::uint64_t>(seed.get<std::int64_t>());
        } else {
            throw PlanParseError("\"root_seed\" must be a non-negative integer");
        }
    }
    if (doc.contains("workers")) {
        const std::uint64_t w = positive_integer(doc["workers"], "workers");
        if (w > std::numeric_limits<unsigned>::max()) {
            throw PlanParseError("workers is out of range");
        }
        plan.workers = static_cast<unsigned>(w);
    }
    if (doc.contains("adaptive_target")) {
        const json& target = doc["adaptive_target"];
        if (!target.is_number()) {
            throw PlanParseError("\"adaptive_target\" must be a number");
        }
        plan.adaptive_target = target.get<double>();
    }

    validate_plan(plan);
    return plan;
}

std::string plan_to_json(const ExperimentPlan& plan) {
    nlohmann::ordered_json doc;
    doc["dimensions"] = plan.dimensions;
    if (plan.schedule.empty()) {
        doc["schedule"] = "default";
    } else {
        nlohmann::ordered_json sched = nlohmann::ordered_json::object();
        for (const auto& [dim, rows] : plan.schedule) {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const ScheduleRow& row : rows) {
                arr.push_back({row.sample_size, row.run_count});
            }
            sched[std::to_string(dim)] = std::move(arr);
        }
        doc["schedule"] = std::move(sched);
    }
    doc["root_seed"] = plan.root_seed;
    doc["workers"] = plan.workers;
    if (plan.adaptive_target) doc["adaptive_target"] = *plan.adaptive_target;
    return doc.dump(2) + "\n";
}

std::uint64_t derive_stream(Dimension d, std::size_t size_index,
                            unsigned run_index) {
    std::uint64_t h = mix64(d.value());
    h = mix64(h ^ static_cast<std::uint64_t>(size_index));
    h = mix64(h ^ static_cast<std::uint64_t>(run_index));
    return h;
}

ResultSet run_experiment(const ExperimentPlan& plan,
                         const ProgressFn& progress) {
    validate_plan(plan);

    ResultSet results;
    results.plan = plan;

    struct DimensionLayout {
        unsigned dimension = 0;
        std::vector<ScheduleRow> rows;
        std::size_t first_cell = 0;
    };
    std::vector<DimensionLayout> layout;
    std::vector<Cell> cells;
    for (const unsigned d : plan.dimensions) {
        DimensionLayout dl;
        dl.dimension = d;
        dl.rows = plan.rows_for(Dimension(d));
        dl.first_cell = cells.size();
        for (std::size_t s = 0; s < dl.rows.size(); ++s) {
            for (unsigned r = 0; r < dl.rows[s].run_count; ++r) {
                cells.push_back(
                    {cells.size(), d, s, r, dl.rows[s].sample_size});
            }
        }
        layout.push_back(std::move(dl));
    }

    const std::size_t total = cells.size();
    std::vector<CellOutcome> outcomes(total);

    const auto run_cell = [&plan, &outcomes](const Cell& cell) {
        CellOutcome& out = outcomes[cell.flat_index];
        const Dimension d(cell.dimension);
        const std::uint64_t stream =
            derive_stream(d, cell.size_index, cell.run_index);
        out.record.dimension = cell.dimension;
        out.record.sample_size = cell.sample_size;
        out.record.run_index = cell.run_index;
        out.record.seed_stream = stream;
        try {
            const auto start = std::chrono::steady_clock::now();
            const HitCount tally = parallel_count(
                {plan.root_seed, stream}, d, cell.sample_size, plan.workers);
            const auto stop = std::chrono::steady_clock::now();
            const PiEstimate est = estimate_pi(tally);
            out.record.trials = tally.trials;
            out.record.hits = tally.hits;
            out.record.p_hat = est.p_hat;
            out.record.pi_hat = est.pi_hat;
            out.record.std_error = est.std_error;
            out.record.valid = est.valid;
            out.record.wall_time_ms =
                std::chrono::duration<double, std::milli>(stop - start).count();
            out.estimate = est;
        } catch (const std::exception& e) {
            out.failure = e.what();
            if (out.failure.empty()) out.failure = "unknown failure";
        }
    };

    if (plan.workers == 1 || total <= 1) {
        std::size_t done = 0;
        for (const Cell& cell : cells) {
            run_cell(cell);
            ++done;
            if (progress) progress(done, total);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> done{0};
        std::mutex progress_mutex;
        const auto drain = [&] {
            for (;;) {
                const std::size_t i =
                    next.fetch_add(1, std::memory_order_relaxed);
                if (i >= total) return;
                run_cell(cells[i]);
                const std::size_t completed = done.fetch_add(1) + 1;
                if (progress) {
                    const std::lock_guard<std::mutex> lock(progress_mutex);
                    progress(completed, total);
                }
            }
        };
        const std::size_t extra =
            std::min<std::size_t>(plan.workers, total) - 1;
        std::vector<std::thread> pool;
        pool.reserve(extra);
        for (std::size_t i = 0; i < extra; ++i) pool.emplace_back(drain);
        drain();
        for (std::thread& t : pool) t.join();
    }

    for (const DimensionLayout& dl : layout) {
        std::vector<RunGroup> groups;
        std::size_t cursor = dl.first_cell;
        for (const ScheduleRow& row : dl.rows) {
            RunGroup group;
            group.sample_size = row.sample_size;
            for (unsigned r = 0; r < row.run_count; ++r) {
                const CellOutcome& out = outcomes[cursor++];
                if (!out.failure.empty()) {
                    results.failures.push_back(
                        {dl.dimension, row.sample_size, r, out.failure});
                    continue;
                }
                results.runs.push_back(out.record);
                group.estimates.push_back(*out.estimate);
                group.wall_times_ms.push_back(out.record.wall_time_ms);
            }
            if (!group.estimates.empty()) groups.push_back(std::move(group));
        }
        if (groups.empty()) {
            results.failures.push_back({dl.dimension, 0, 0,
                                        "dimension produced no completed runs"});
            continue;
        }
        try {
            results.summaries.push_back(
                aggregate_runs(Dimension(dl.dimension), groups));
        } catch (const AggregationError& e) {
            results.failures.push_back({dl.dimension, 0, 0, e.what()});
        }
    }
    results.grand_mean = grand_mean(results.summaries);
    return results;
}

double grand_mean(const std::vector<DimensionSummary>& summaries) {
    if (summaries.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (const DimensionSummary& s : summaries) sum += s.final_value;
    return sum / static_cast<double>(summaries.size());
}

TimingCurve timing_curve(const ResultSet& results) {
    TimingCurve curve;
    std::map<unsigned, std::map<std::uint64_t, std::vector<double>>> by_dim;
    for (const RunRecord& run : results.runs) {
        by_dim[run.dimension][run.sample_size].push_back(run.wall_time_ms);
    }
    for (const auto& [dim, sizes] : by_dim) {
        if (sizes.size() < 2) {
            curve.omitted.push_back(dim);
            continue;
        }
        // Mean of the two tier means, so a tier with fewer runs (the top
        // tier runs only twice in the built-in schedule) weighs the same as
        // a full one.
        double tier_sum = 0.0;
        auto it = sizes.rbegin();
        for (int tier = 0; tier < 2; ++tier, ++it) {
            double sum = 0.0;
            for (const double t : it->second) sum += t;
            tier_sum += sum / static_cast<double>(it->second.size());
        }
        curve.points.emplace_back(dim, tier_sum / 2.0);
    }
    return curve;
}

}  // namespace hyperpi
