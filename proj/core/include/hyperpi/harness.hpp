#pragma once

#include "hyperpi/estimator.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hyperpi {

/// One schedule entry: repeat `run_count` independent runs of `sample_size`
/// points each.
struct ScheduleRow {
    std::uint64_t sample_size = 0;
    unsigned run_count = 0;

    friend bool operator==(const ScheduleRow&, const ScheduleRow&) = default;
};

/// Raised when no schedule is defined for a requested dimension.
class ScheduleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The built-in per-dimension schedule for 1 <= d <= 20. Sample sizes grow
/// with d to chase the vanishing hit probability; the largest tier at
/// d >= 16 runs only twice because of its cost. Throws ScheduleError beyond
/// d = 20, where callers must supply an explicit or adaptive schedule.
std::vector<ScheduleRow> default_schedule(Dimension d);

/// Raised when a plan document cannot be parsed or validated.
class PlanParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Declarative description of a sweep.
///
/// `schedule` maps a dimension to its explicit rows; dimensions without an
/// entry use the adaptive rule when adaptive_target is set, otherwise the
/// built-in schedule. The adaptive rule sizes every run at
/// required_samples(d, adaptive_target) and repeats it five times.
struct ExperimentPlan {
    std::vector<unsigned> dimensions;
    std::map<unsigned, std::vector<ScheduleRow>> schedule;
    std::uint64_t root_seed = 0;
    unsigned workers = 1;
    std::optional<double> adaptive_target;

    /// Resolved rows for one dimension, applying the precedence above.
    std::vector<ScheduleRow> rows_for(Dimension d) const;

    friend bool operator==(const ExperimentPlan&,
                           const ExperimentPlan&) = default;
};

/// Parses a plan from its JSON form. Field names: "dimensions" (required,
/// array of positive integers), "schedule" (either the string "default" or
/// an object mapping dimension to [sample_size, run_count] pairs),
/// "root_seed", "workers", "adaptive_target". Unknown fields are rejected.
ExperimentPlan plan_from_json(const std::string& text);

/// Inverse of plan_from_json; an empty schedule map serializes as "default".
std::string plan_to_json(const ExperimentPlan& plan);

/// Stream index of one (dimension, schedule row, run) cell. Bit-mixed so
/// that every cell of every sweep occupies its own generator stream; the
/// root seed stays untouched as the generator key.
std::uint64_t derive_stream(Dimension d, std::size_t size_index,
                            unsigned run_index);

/// Flat record of one executed run, as it lands in the run table.
struct RunRecord {
    unsigned dimension = 0;
    std::uint64_t sample_size = 0;
    unsigned run_index = 0;
    std::uint64_t seed_stream = 0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double p_hat = 0.0;
    std::optional<double> pi_hat;
    std::optional<double> std_error;
    bool valid = false;
    double wall_time_ms = 0.0;
};

/// A cell that failed outright (as opposed to a zero-hit run, which is a
/// recorded result). The sweep continues past it.
struct CellFailure {
    unsigned dimension = 0;
    std::uint64_t sample_size = 0;
    unsigned run_index = 0;
    std::string message;
};

/// Everything a sweep produces. `runs` is ordered by (dimension position in
/// the plan, schedule row, run index); `summaries` holds one entry per plan
/// dimension that aggregated successfully, in plan order. grand_mean is the
/// mean of the per-dimension finals, NaN when no dimension survived.
struct ResultSet {
    ExperimentPlan plan;
    std::vector<RunRecord> runs;
    std::vector<DimensionSummary> summaries;
    std::vector<CellFailure> failures;
    double grand_mean = 0.0;
};

/// Progress callback: (cells completed, cells total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Executes a plan. Cells are the unit of parallelism across plan.workers
/// threads, and a single cell larger than one substream fans out internally
/// as well; neither affects the recorded numbers, which depend only on
/// (plan contents, root seed). Throws PlanParseError for an invalid plan
/// and ScheduleError when a dimension has no resolvable schedule.
ResultSet run_experiment(const ExperimentPlan& plan,
                         const ProgressFn& progress = {});

/// Mean of the per-dimension finals across a result set.
double grand_mean(const std::vector<DimensionSummary>& summaries);

/// Per-dimension representative wall time: the mean of the per-tier mean run
/// times of the two largest sample-size rows. Dimensions with fewer than two
/// rows are listed in `omitted` instead of charted.
struct TimingCurve {
    std::vector<std::pair<unsigned, double>> points;  // (dimension, mean ms)
    std::vector<unsigned> omitted;
};

TimingCurve timing_curve(const ResultSet& results);

}  // namespace hyperpi
