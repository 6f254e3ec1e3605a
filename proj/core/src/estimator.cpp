#include "hyperpi/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hyperpi {
namespace {

// Two-sided 95% normal quantile.
constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double low;
    double high;
};

Interval wald_interval(double p, std::uint64_t n) {
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return {p - half, p + half};
}

Interval wilson_interval(double p, std::uint64_t n) {
    const double nn = static_cast<double>(n);
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half =
        kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {center - half, center + half};
}

double mean(const std::vector<double>& values) {
    double sum = 0.0;
    for (const double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

PiEstimate estimate_pi(const HitCount& tally, IntervalMethod method) {
    if (tally.trials == 0) {
        throw std::invalid_argument("estimate_pi: tally has zero trials");
    }
    if (tally.hits > tally.trials) {
        throw std::invalid_argument("estimate_pi: hits exceed trials");
    }
    PiEstimate est{tally.d, tally.trials, tally.hits};
    est.p_hat =
        static_cast<double>(tally.hits) / static_cast<double>(tally.trials);
    if (tally.hits == 0) return est;  // no finite estimate; flagged invalid
    est.valid = true;
    est.pi_hat = pi_from_probability(est.p_hat, tally.d);

    if (tally.d.value() == 1) {
        // Every point of [-1,1) hits, so the estimate is exact by construction.
        est.std_error = 0.0;
        est.ci_low = est.pi_hat;
        est.ci_high = est.pi_hat;
        return est;
    }
    if (tally.hits == tally.trials) return est;  // p_hat = 1: no variance model

    est.std_error = standard_error(est.p_hat, tally.trials, tally.d, *est.pi_hat);
    const Interval ci = method == IntervalMethod::wald
                            ? wald_interval(est.p_hat, tally.trials)
                            : wilson_interval(est.p_hat, tally.trials);
    // The recovery map is monotone in p, so mapping the endpoints gives the
    // interval for pi. A non-positive lower endpoint (possible under Wald at
    // small hit counts) recovers nothing and collapses to 0.
    est.ci_low = ci.low > 0.0
                     ? pi_from_probability(std::min(ci.low, 1.0), tally.d)
                     : 0.0;
    est.ci_high = pi_from_probability(std::min(ci.high, 1.0), tally.d);
    return est;
}

double standard_error(double p_hat, std::uint64_t trials, Dimension d,
                      double pi_hat) {
    if (trials == 0) {
        throw std::invalid_argument("standard_error: trials must be at least 1");
    }
    if (!(p_hat > 0.0) || !(p_hat < 1.0)) {
        throw std::domain_error(
            "standard_error: p_hat must lie strictly between 0 and 1");
    }
    const double se_p =
        std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
    return (2.0 / static_cast<double>(d.value())) * (pi_hat / p_hat) * se_p;
}

std::uint64_t required_samples(Dimension d, double target_rel_se) {
    if (!(target_rel_se > 0.0) || !(target_rel_se < 1.0)) {
        throw std::domain_error(
            "required_samples: target relative SE must lie in (0, 1)");
    }
    const double p = inside_probability(d);
    if (p >= 1.0) return 1;  // d = 1 has zero variance
    const double factor =
        2.0 / (static_cast<double>(d.value()) * target_rel_se);
    const double n = factor * factor * (1.0 - p) / p;
    if (n >= static_cast<double>(std::numeric_limits<std::uint64_t>::max())) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(n)));
}

double relative_error(double value) {
    if (!(value > 0.0)) {
        throw std::invalid_argument(
            "relative_error: value must be positive, got " +
            std::to_string(value));
    }
    return (value - std::numbers::pi) / std::numbers::pi;
}

DimensionSummary aggregate_runs(Dimension d,
                                const std::vector<RunGroup>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("aggregate_runs: no rows to aggregate");
    }
    DimensionSummary summary{d};
    for (const RunGroup& row : rows) {
        if (row.estimates.empty()) {
            throw std::invalid_argument(
                "aggregate_runs: row at sample size " +
                std::to_string(row.sample_size) + " has no runs");
        }
        SummaryRow out;
        out.sample_size = row.sample_size;
        out.wall_times_ms = row.wall_times_ms;
        for (const PiEstimate& est : row.estimates) {
            if (est.d != d) {
                throw std::invalid_argument(
                    "aggregate_runs: estimate tallied at dimension " +
                    std::to_string(est.d.value()) + ", expected " +
                    std::to_string(d.value()));
            }
            if (est.valid && est.pi_hat) {
                out.run_estimates.push_back(*est.pi_hat);
            } else {
                ++summary.excluded_invalid_runs;
            }
        }
        if (out.run_estimates.empty()) {
            ++summary.dropped_rows;
            continue;
        }
        out.average = mean(out.run_estimates);
        summary.rows.push_back(std::move(out));
    }
    if (summary.rows.empty()) {
        throw AggregationError(
            "aggregate_runs: every run at dimension " +
            std::to_string(d.value()) +
            " produced zero hits; nothing to average");
    }
    std::vector<double> averages;
    averages.reserve(summary.rows.size());
    for (const SummaryRow& row : summary.rows) averages.push_back(row.average);
    summary.final_value = mean(averages);
    summary.relative_error = relative_error(summary.final_value);
    return summary;
}

}  // namespace hyperpi
