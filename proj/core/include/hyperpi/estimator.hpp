#pragma once

#include "hyperpi/sampling.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hyperpi {

/// Confidence interval construction for the hit probability. Wald is the
/// textbook p +- z*sqrt(p(1-p)/n); Wilson stays inside (0,1) and behaves at
/// small hit counts, which matters once d is large enough that hits are rare.
enum class IntervalMethod { wald, wilson };

/// Point estimate of pi recovered from one tally, with its uncertainty.
///
/// valid is false exactly when the tally had zero hits; the estimate is then
/// deliberately absent rather than some sentinel value, because no finite
/// pi_hat is recoverable from p_hat = 0. At d = 1 every point hits, the
/// estimate is exact, and the standard error is zero. With hits == trials at
/// d >= 2 the point estimate exists but the binomial uncertainty model does
/// not, so std_error and the Wald interval stay empty.
struct PiEstimate {
    PiEstimate(Dimension dim, std::uint64_t trial_count,
               std::uint64_t hit_count)
        : d(dim), trials(trial_count), hits(hit_count) {}

    Dimension d;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double p_hat = 0.0;
    std::optional<double> pi_hat;
    std::optional<double> std_error;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    bool valid = false;
};

/// Recovers pi from a tally: pi_hat = (p_hat * 2^d * Gamma(d/2+1))^(2/d),
/// with a 95% confidence interval mapped through the same recovery.
PiEstimate estimate_pi(const HitCount& tally,
                       IntervalMethod method = IntervalMethod::wald);

/// Delta-method standard error of pi_hat: (2/d) * (pi_hat/p_hat) *
/// sqrt(p_hat(1-p_hat)/trials). Requires 0 < p_hat < 1.
double standard_error(double p_hat, std::uint64_t trials, Dimension d,
                      double pi_hat);

/// Smallest sample size whose predicted relative standard error of pi_hat is
/// at most target_rel_se, from the analytic hit probability:
/// ceil((2/(d*eps))^2 * (1-P)/P). Saturates at the uint64 maximum once the
/// prediction leaves the representable range. Requires 0 < target_rel_se < 1.
std::uint64_t required_samples(Dimension d, double target_rel_se);

/// Signed relative deviation (value - pi) / pi. Requires value > 0.
double relative_error(double value);

/// Raw material of one table row: repeated runs at one sample size.
struct RunGroup {
    std::uint64_t sample_size = 0;
    std::vector<PiEstimate> estimates;
    std::vector<double> wall_times_ms;
};

/// One aggregated row: the valid run estimates and their mean.
struct SummaryRow {
    std::uint64_t sample_size = 0;
    std::vector<double> run_estimates;
    double average = 0.0;
    std::vector<double> wall_times_ms;
};

/// Raised when aggregation has nothing left to average.
class AggregationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Per-dimension aggregate in the two-stage protocol: each row averages its
/// runs, the final averages the row averages (rows weigh equally regardless
/// of sample size), and the relative error compares the final against pi.
struct DimensionSummary {
    explicit DimensionSummary(Dimension dim) : d(dim) {}

    Dimension d;
    std::vector<SummaryRow> rows;
    double final_value = 0.0;
    double relative_error = 0.0;
    std::uint64_t excluded_invalid_runs = 0;
    std::uint64_t dropped_rows = 0;
};

/// Aggregates rows of runs for one dimension. Invalid runs are excluded and
/// counted; a row whose runs are all invalid is dropped (dropped_rows says
/// how many). Throws AggregationError when no row survives, and
/// std::invalid_argument for an empty row list, a row with no runs, or an
/// estimate tallied at a different dimension.
DimensionSummary aggregate_runs(Dimension d, const std::vector<RunGroup>& rows);

}  // namespace hyperpi
