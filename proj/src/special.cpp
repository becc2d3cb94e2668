#include "sensing/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sensing {

namespace {

// Above this argument the asymptotic expansion is accurate to rounding.
constexpr double kAsymptoticFrom = 500.0;

double log_i0_asymptotic(double x) {
    // I0(x) ~ e^x / sqrt(2 pi x) * sum_k [(2k-1)!!]^2 / (k! (8x)^k)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (8.0 * k * x);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

}  // namespace

double log_bessel_i0(double x) {
    x = std::abs(x);
    if (x < kAsymptoticFrom) return std::log(std::cyl_bessel_i(0.0, x));
    return log_i0_asymptotic(x);
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) return -std::numeric_limits<double>::infinity();
    const double peak = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(peak)) return peak;
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - peak);
    return peak + std::log(acc);
}

double log_sum_exp_weighted(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size())
        throw std::invalid_argument("log_sum_exp_weighted: size mismatch");
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (weights[i] > 0.0) peak = std::max(peak, values[i]);
    if (!std::isfinite(peak)) return peak;
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (weights[i] > 0.0) acc += weights[i] * std::exp(values[i] - peak);
    return peak + std::log(acc);
}

}  // namespace sensing
