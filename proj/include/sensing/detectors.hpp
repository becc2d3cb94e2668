#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sensing/signal_model.hpp"

namespace sensing {

/// Arithmetic tally in units of complex multiplications and additions.
/// Mixture bookkeeping (exp/log of the bank's K terms) is kept apart in
/// `mixture_ops` so the filtering cost stays comparable across detectors.
struct OpCount {
    std::int64_t complex_mults{0};
    std::int64_t complex_adds{0};
    std::int64_t mixture_ops{0};

    constexpr OpCount& operator+=(const OpCount& other) {
        complex_mults += other.complex_mults;
        complex_adds += other.complex_adds;
        mixture_ops += other.mixture_ops;
        return *this;
    }
    friend constexpr OpCount operator+(OpCount a, const OpCount& b) { return a += b; }
    friend bool operator==(const OpCount&, const OpCount&) = default;
};

/// Cost of `n` multiply-accumulate pairs.
constexpr OpCount mac_cost(std::int64_t n) { return OpCount{n, n, 0}; }

struct DetectorOutput {
    double statistic{0.0};
    Hypothesis decision{Hypothesis::H0};
    OpCount op_count{};
};

/// Discrete frequency prior for the matched-filter bank.
struct BankConfig {
    std::vector<double> frequencies;
    std::vector<double> weights;

    std::size_t size() const { return frequencies.size(); }

    /// K filters at omega_k = (omega_bar - eps) + k * delta, k = 1..K,
    /// delta = 2 eps / K, equal weights 1/K.
    static BankConfig uniform(const ModelParams& params, std::size_t k_filters);

    /// Throws std::invalid_argument on empty grids, size mismatch, negative
    /// weights, weights not summing to one or frequencies off the support.
    void validate(const ModelParams& params) const;
};

/// y_c = sum y(m) cos(m w), y_s = sum y(m) sin(m w), m = 1..M.
struct Correlation {
    double y_c{0.0};
    double y_s{0.0};

    double magnitude() const;
};

Correlation correlate(std::span<const double> samples, double omega);

/// gamma = [P(H0) / P(H1)] * [(C10 - C00) / (C01 - C11)].
/// Throws std::domain_error when P(H1) = 0 or C01 = C11.
double bayes_threshold(const ModelParams& params);

/// log p(y | H0) for i.i.d. N(0, sigma_v^2) samples.
double null_log_evidence(const Frame& frame, const ModelParams& params);

double energy_statistic(const Frame& frame);

/// r(w) = sqrt(y_c^2 + y_s^2).
double matched_filter_statistic(const Frame& frame, double omega);

// Likelihood ratios. The log_* forms are the primary interface; the plain
// forms exponentiate and throw std::overflow_error if the ratio is not
// representable.

/// Known gain and frequency: exp(-M h^2 / 2 s_v) I0(2 h r(w) / s_v).
double log_lr_case1(const Frame& frame, const ModelParams& params, double omega, double h);
double lr_case1(const Frame& frame, const ModelParams& params, double omega, double h);

/// Rayleigh gain marginalised out, frequency known, as a function of r(w)
/// for a frame of `m` samples.
double log_lr_case2_from_r(double r, std::size_t m, const ModelParams& params);
double log_lr_case2(const Frame& frame, const ModelParams& params, double omega);
double lr_case2(const Frame& frame, const ModelParams& params, double omega);

/// Frequency marginalised over a discrete prior: sum_k p_k LR_II(w_k).
double log_lr_case3_bank(const Frame& frame, const ModelParams& params, const BankConfig& bank);
double lr_case3_bank(const Frame& frame, const ModelParams& params, const BankConfig& bank);

/// argmax of r(w) over `grid_size` equispaced points of [lo, hi], ends
/// included; the lowest frequency wins ties. A single-point grid evaluates
/// the midpoint. For an all-zero frame every point ties and `lo` comes back,
/// which carries no information about the pilot.
double periodogram_ml_frequency(const Frame& frame, std::size_t grid_size, double lo, double hi);

/// LR_II at the periodogram frequency estimate over the model's support.
double log_glrt_periodogram(const Frame& frame, const ModelParams& params, std::size_t grid_size);
double glrt_periodogram(const Frame& frame, const ModelParams& params, std::size_t grid_size);

/// H1 iff statistic >= threshold.
Hypothesis decide(double statistic, double threshold);

// Detectors with operation accounting. LR-based detectors report log-LR
// statistics, so `log_threshold` is log(gamma).

DetectorOutput energy_detector(const Frame& frame, double threshold);
DetectorOutput matched_filter_detector(const Frame& frame, const ModelParams& params, double omega,
                                       double log_threshold);
DetectorOutput bank_detector(const Frame& frame, const ModelParams& params, const BankConfig& bank,
                             double log_threshold);
DetectorOutput periodogram_detector(const Frame& frame, const ModelParams& params,
                                    std::size_t grid_size, double log_threshold);

}  // namespace sensing
