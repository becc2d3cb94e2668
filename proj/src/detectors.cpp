#include "sensing/detectors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sensing/special.hpp"

namespace sensing {

namespace {

double checked_exp(double log_value, const char* what) {
    const double value = std::exp(log_value);
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << what << ": likelihood ratio exp(" << log_value << ") is not representable";
        throw std::overflow_error(msg.str());
    }
    return value;
}

std::int64_t as_i64(std::size_t n) { return static_cast<std::int64_t>(n); }

}  // namespace

BankConfig BankConfig::uniform(const ModelParams& params, std::size_t k_filters) {
    if (k_filters == 0) throw std::invalid_argument("bank needs at least one filter");
    BankConfig bank;
    const double delta = 2.0 * params.epsilon / static_cast<double>(k_filters);
    bank.frequencies.reserve(k_filters);
    for (std::size_t k = 1; k <= k_filters; ++k)
        bank.frequencies.push_back(params.omega_lo() + static_cast<double>(k) * delta);
    bank.weights.assign(k_filters, 1.0 / static_cast<double>(k_filters));
    return bank;
}

void BankConfig::validate(const ModelParams& params) const {
    if (frequencies.empty()) throw std::invalid_argument("bank is empty");
    if (frequencies.size() != weights.size())
        throw std::invalid_argument("bank frequencies and weights differ in length");
    // Grid points are computed as lo + k * delta, so allow rounding at the ends.
    const double slack = 1e-12;
    for (double w : frequencies)
        if (w < params.omega_lo() - slack || w > params.omega_hi() + slack)
            throw std::invalid_argument("bank frequency outside the support");
    double total = 0.0;
    for (double p : weights) {
        if (!(p >= 0.0)) throw std::invalid_argument("bank weights must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("bank weights must sum to one");
}

double Correlation::magnitude() const { return std::hypot(y_c, y_s); }

Correlation correlate(std::span<const double> samples, double omega) {
    // (cos mw, sin mw) advanced by rotation instead of per-sample trig calls.
    const double step_c = std::cos(omega);
    const double step_s = std::sin(omega);
    double c = step_c;
    double s = step_s;
    Correlation out;
    for (double y : samples) {
        out.y_c += y * c;
        out.y_s += y * s;
        const double next_c = c * step_c - s * step_s;
        s = s * step_c + c * step_s;
        c = next_c;
    }
    return out;
}

double bayes_threshold(const ModelParams& params) {
    const double p1 = params.p_h1();
    const double cost_gap = params.costs.c01 - params.costs.c11;
    if (p1 == 0.0) throw std::domain_error("bayes_threshold: P(H1) is zero");
    if (cost_gap == 0.0) throw std::domain_error("bayes_threshold: C01 equals C11");
    return (params.p_h0 / p1) * ((params.costs.c10 - params.costs.c00) / cost_gap);
}

double null_log_evidence(const Frame& frame, const ModelParams& params) {
    const double var = params.sigma_v_sq;
    const double norm = -0.5 * std::log(2.0 * std::numbers::pi * var);
    double total = 0.0;
    for (double y : frame.samples) total += norm - y * y / (2.0 * var);
    return total;
}

double energy_statistic(const Frame& frame) {
    return std::transform_reduce(frame.samples.begin(), frame.samples.end(), 0.0, std::plus<>{},
                                 [](double y) { return y * y; });
}

double matched_filter_statistic(const Frame& frame, double omega) {
    return correlate(frame.samples, omega).magnitude();
}

double log_lr_case1(const Frame& frame, const ModelParams& params, double omega, double h) {
    const double var = params.sigma_v_sq;
    const double m = static_cast<double>(frame.size());
    const double r = matched_filter_statistic(frame, omega);
    return -m * h * h / (2.0 * var) + log_bessel_i0(2.0 * h * r / var);
}

double lr_case1(const Frame& frame, const ModelParams& params, double omega, double h) {
    return checked_exp(log_lr_case1(frame, params, omega, h), "lr_case1");
}

double log_lr_case2_from_r(double r, std::size_t m, const ModelParams& params) {
    const double var = params.sigma_v_sq;
    const double denom = var + static_cast<double>(m) * params.sigma_h_sq;
    return std::log(var / denom) + 2.0 * params.sigma_h_sq * r * r / (var * denom);
}

double log_lr_case2(const Frame& frame, const ModelParams& params, double omega) {
    return log_lr_case2_from_r(matched_filter_statistic(frame, omega), frame.size(), params);
}

double lr_case2(const Frame& frame, const ModelParams& params, double omega) {
    return checked_exp(log_lr_case2(frame, params, omega), "lr_case2");
}

double log_lr_case3_bank(const Frame& frame, const ModelParams& params, const BankConfig& bank) {
    std::vector<double> terms;
    terms.reserve(bank.size());
    for (double w : bank.frequencies) terms.push_back(log_lr_case2(frame, params, w));
    return log_sum_exp_weighted(terms, bank.weights);
}

double lr_case3_bank(const Frame& frame, const ModelParams& params, const BankConfig& bank) {
    return checked_exp(log_lr_case3_bank(frame, params, bank), "lr_case3_bank");
}

double periodogram_ml_frequency(const Frame& frame, std::size_t grid_size, double lo, double hi) {
    if (grid_size == 0) throw std::invalid_argument("periodogram grid must be nonempty");
    if (grid_size == 1) return 0.5 * (lo + hi);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    double best_omega = lo;
    double best_power = -1.0;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double omega = lo + static_cast<double>(i) * step;
        const auto corr = correlate(frame.samples, omega);
        const double power = corr.y_c * corr.y_c + corr.y_s * corr.y_s;
        if (power > best_power) {
            best_power = power;
            best_omega = omega;
        }
    }
    return best_omega;
}

double log_glrt_periodogram(const Frame& frame, const ModelParams& params, std::size_t grid_size) {
    const double omega_ml =
        periodogram_ml_frequency(frame, grid_size, params.omega_lo(), params.omega_hi());
    return log_lr_case2(frame, params, omega_ml);
}

double glrt_periodogram(const Frame& frame, const ModelParams& params, std::size_t grid_size) {
    return checked_exp(log_glrt_periodogram(frame, params, grid_size), "glrt_periodogram");
}

Hypothesis decide(double statistic, double threshold) {
    return statistic >= threshold ? Hypothesis::H1 : Hypothesis::H0;
}

DetectorOutput energy_detector(const Frame& frame, double threshold) {
    const double t = energy_statistic(frame);
    return {t, decide(t, threshold), mac_cost(as_i64(frame.size()))};
}

DetectorOutput matched_filter_detector(const Frame& frame, const ModelParams& params, double omega,
                                       double log_threshold) {
    const double t = log_lr_case2(frame, params, omega);
    return {t, decide(t, log_threshold), mac_cost(2 * as_i64(frame.size()))};
}

DetectorOutput bank_detector(const Frame& frame, const ModelParams& params, const BankConfig& bank,
                             double log_threshold) {
    const double t = log_lr_case3_bank(frame, params, bank);
    OpCount ops = mac_cost(2 * as_i64(frame.size()) * as_i64(bank.size()));
    ops.mixture_ops = as_i64(bank.size());
    return {t, decide(t, log_threshold), ops};
}

DetectorOutput periodogram_detector(const Frame& frame, const ModelParams& params,
                                    std::size_t grid_size, double log_threshold) {
    const double t = log_glrt_periodogram(frame, params, grid_size);
    return {t, decide(t, log_threshold), mac_cost(2 * as_i64(frame.size()) * as_i64(grid_size))};
}

}  // namespace sensing
