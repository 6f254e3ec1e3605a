#pragma once

#include <compare>
#include <stdexcept>

namespace hyperpi {

/// Number of coordinates of the sampling space. Always >= 1.
class Dimension {
public:
    explicit constexpr Dimension(unsigned value) : value_(value) {
        if (value == 0) {
            throw std::invalid_argument("Dimension: d must be >= 1");
        }
    }

    constexpr unsigned value() const noexcept { return value_; }

    auto operator<=>(const Dimension&) const = default;

private:
    unsigned value_;
};

/// A hit fraction of zero carries no information about pi; the recovery
/// formula is undefined there and callers must flag the run instead.
class ZeroProbabilityError : public std::domain_error {
public:
    ZeroProbabilityError()
        : std::domain_error("probability is zero; pi cannot be recovered from a zero hit fraction") {}
};

/// Exact geometry of the unit ball inscribed in the cube [-1,1]^d.
/// cube_volume overflows to +inf past d ~ 1023; the log-space functions
/// below stay finite far beyond that.
struct ExactGeometry {
    Dimension d;
    double ball_volume;
    double cube_volume;          // 2^d
    double inside_probability;   // ball_volume / cube_volume
};

ExactGeometry exact_geometry(Dimension d);

/// Natural log of the Gamma function for x > 0.
/// Absolute error <= 1e-12 on [0.5, 200]. Throws std::domain_error for x <= 0.
double log_gamma(double x);

/// Volume of the d-dimensional unit ball, pi^(d/2) / Gamma(d/2 + 1).
double unit_ball_volume(Dimension d);
double log_unit_ball_volume(Dimension d);

/// Probability that a uniform point of [-1,1]^d lands in the unit ball.
/// Exactly 1 for d = 1; strictly decreasing in d.
double inside_probability(Dimension d);
double log_inside_probability(Dimension d);

/// Recovers pi from an inside probability: (p * 2^d * Gamma(d/2+1))^(2/d).
/// Evaluated through logs so that 2^d * Gamma(d/2+1) never overflows.
/// Throws ZeroProbabilityError for p <= 0 and std::domain_error for p > 1.
double pi_from_probability(double p, Dimension d);

/// Stirling-based asymptotic for inside_probability:
/// (1/sqrt(pi d)) * (pi e / (2d))^(d/2). Requires d >= 2.
double stirling_ratio_approx(Dimension d);
double log_stirling_ratio_approx(Dimension d);

}  // namespace hyperpi
