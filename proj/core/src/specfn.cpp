#include "hyperpi/specfn.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace hyperpi {

namespace {

// Lanczos rational approximation for Gamma, N=13, g=6.024680040776729583740234375.
// Coefficients due to Godfrey/Pugh, tuned for IEEE double; the same set is
// carried by Boost.Math and many downstream projects.
constexpr double kLanczosG = 6.024680040776729583740234375;

constexpr std::array<double, 13> kLanczosNum = {
    23531376880.410759688572007674451636754734,
    42919803642.649098768957899047001988850926,
    35711959237.355668049440185451547166705960,
    17921034426.037209699919755754458931112671,
    6039542586.3520280050642916443072979210699,
    1439720407.3117216736632230727949123939715,
    248874557.86205415651146038641322942321632,
    31426415.585400194380614231628318205362874,
    2876370.6289353724412254090516208496135991,
    186056.26539522349504029949897160456992822,
    8071.6720023658162106380029022722506138218,
    210.82427775157934587250973392071336271166,
    2.5066282746310002701649081771338373386264,
};

// z (z+1) ... (z+11) expanded; integer coefficients are exact in double.
constexpr std::array<double, 13> kLanczosDen = {
    0.0,        39916800.0, 120543840.0, 150917976.0, 105258076.0,
    45995730.0, 13339535.0, 2637558.0,   357423.0,    32670.0,
    1925.0,     66.0,       1.0,
};

// num/denom share the degree, so evaluating both in 1/z for z > 1 keeps the
// partial sums bounded for arbitrarily large arguments.
double lanczos_sum(double z) {
    double num = 0.0;
    double den = 0.0;
    if (z <= 1.0) {
        for (int i = 12; i >= 0; --i) {
            num = num * z + kLanczosNum[static_cast<std::size_t>(i)];
            den = den * z + kLanczosDen[static_cast<std::size_t>(i)];
        }
    } else {
        const double u = 1.0 / z;
        for (int i = 0; i <= 12; ++i) {
            num = num * u + kLanczosNum[static_cast<std::size_t>(i)];
            den = den * u + kLanczosDen[static_cast<std::size_t>(i)];
        }
    }
    return num / den;
}

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLnPi = 1.1447298858494001741;  // ln(pi)

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: argument must be > 0");
    }
    const double zgh = x + kLanczosG - 0.5;
    return std::log(lanczos_sum(x)) + (x - 0.5) * std::log(zgh) - zgh;
}

double log_unit_ball_volume(Dimension d) {
    const double half_d = 0.5 * static_cast<double>(d.value());
    return half_d * kLnPi - log_gamma(half_d + 1.0);
}

double unit_ball_volume(Dimension d) {
    if (d.value() == 1) return 2.0;
    return std::exp(log_unit_ball_volume(d));
}

double log_inside_probability(Dimension d) {
    if (d.value() == 1) return 0.0;
    return log_unit_ball_volume(d) - static_cast<double>(d.value()) * kLn2;
}

double inside_probability(Dimension d) {
    // d = 1 is deterministic: the ball [-1,1] fills the cube exactly.
    if (d.value() == 1) return 1.0;
    return std::exp(log_inside_probability(d));
}

double pi_from_probability(double p, Dimension d) {
    if (!(p > 0.0)) {
        throw ZeroProbabilityError();
    }
    if (p > 1.0) {
        throw std::domain_error("pi_from_probability: probability must be <= 1");
    }
    const double dd = static_cast<double>(d.value());
    if (d.value() == 1 && p == 1.0) return std::numbers::pi;
    const double log_sum = std::log(p) + dd * kLn2 + log_gamma(0.5 * dd + 1.0);
    return std::exp((2.0 / dd) * log_sum);
}

double log_stirling_ratio_approx(Dimension d) {
    if (d.value() < 2) {
        throw std::domain_error("stirling_ratio_approx: requires d >= 2");
    }
    const double dd = static_cast<double>(d.value());
    return -0.5 * std::log(std::numbers::pi * dd)
           + 0.5 * dd * std::log(std::numbers::pi * std::numbers::e / (2.0 * dd));
}

double stirling_ratio_approx(Dimension d) {
    return std::exp(log_stirling_ratio_approx(d));
}

ExactGeometry exact_geometry(Dimension d) {
    return ExactGeometry{
        .d = d,
        .ball_volume = unit_ball_volume(d),
        .cube_volume = std::ldexp(1.0, static_cast<int>(d.value())),
        .inside_probability = inside_probability(d),
    };
}

}  // namespace hyperpi
