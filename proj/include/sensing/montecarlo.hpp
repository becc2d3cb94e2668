#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sensing/detectors.hpp"
#include "sensing/notch.hpp"
#include "sensing/rng.hpp"
#include "sensing/signal_model.hpp"

namespace sensing {

enum class DetectorKind { Energy, MatchedNominal, MatchedOracle, Bank, PeriodogramGLRT, CANF };

inline constexpr DetectorKind kAllDetectors[] = {
    DetectorKind::Energy, DetectorKind::MatchedNominal, DetectorKind::MatchedOracle,
    DetectorKind::Bank,   DetectorKind::PeriodogramGLRT, DetectorKind::CANF};

const char* to_string(DetectorKind kind);
std::optional<DetectorKind> parse_detector(std::string_view name);

/// One Monte Carlo experiment. `model` is the operating point that
/// run_trials simulates; the SNR list and frame-length sweep are consumed by
/// the presets, which derive operating points with at_operating_point.
struct ExperimentSpec {
    ModelParams model{};
    NotchParams notch{NotchParams::for_model(ModelParams{})};
    std::size_t k_filters{20};
    std::vector<DetectorKind> detectors{};
    std::vector<double> snr_db{0.0, 3.0, 6.0};
    std::size_t trials_per_hypothesis{10000};
    std::optional<double> fixed_omega{2.45};
    RngSeed seed{20140601};
    std::size_t periodogram_grid{4096};
    double target_pfa{0.1};
    std::vector<std::size_t> frame_lengths{64, 128, 256};
    /// Notch step sizes are given for this frame length and scaled by
    /// reference / M for other lengths.
    std::size_t step_reference_length{64};
    /// SNR of `model`, when it was set through at_operating_point.
    std::optional<double> operating_snr_db{};
    /// Worker threads for run_trials; 0 picks the hardware concurrency.
    std::size_t threads{0};

    BankConfig bank() const { return BankConfig::uniform(model, k_filters); }

    std::vector<std::string> violations() const;
    void validate() const;
};

/// Copy of `params` with sigma_v^2 chosen so that sigma_h^2 / sigma_v^2 (mean
/// pilot power over noise power) equals the requested SNR.
ModelParams snr_to_sigma(double snr_db, const ModelParams& params);

/// Spec at one (SNR, frame length) point: noise variance from the SNR, notch
/// steps rescaled for `m`, and a seed derived from both.
ExperimentSpec at_operating_point(const ExperimentSpec& spec, double snr_db, std::size_t m);

struct TrialRow {
    Hypothesis hypothesis{Hypothesis::H0};
    std::optional<Latents> truth{};
    std::vector<double> statistics{};  // one per TrialLog::detectors entry
    std::vector<OpCount> op_counts{};
    std::optional<double> omega_hat{};  // CANF estimate when CANF runs
};

struct TrialLog {
    std::vector<DetectorKind> detectors;
    std::size_t m_samples{0};
    std::optional<double> snr_db{};
    std::vector<TrialRow> rows;

    /// Index of `kind` in `detectors`; throws std::out_of_range if absent.
    std::size_t column(DetectorKind kind) const;
    std::vector<double> statistics(DetectorKind kind, Hypothesis hypothesis) const;
};

/// A detector failed on a trial.
class TrialError : public std::runtime_error {
public:
    TrialError(std::size_t trial_index, const std::string& what);
    std::size_t trial_index() const { return trial_index_; }

private:
    std::size_t trial_index_;
};

/// Runs trials_per_hypothesis H0 frames followed by as many H1 frames and
/// evaluates every requested detector on each. Trial i draws from a stream
/// keyed by (seed, i), so the log does not depend on the thread count.
TrialLog run_trials(const ExperimentSpec& spec);

struct RocPoint {
    double p_fa{0.0};
    double p_d{0.0};
};

struct RocCurve {
    DetectorKind detector{DetectorKind::Energy};
    std::optional<double> snr_db{};
    std::vector<RocPoint> points;  // p_fa ascending, from (0, 0) to (1, 1)
};

/// Threshold swept over every observed statistic value. Throws
/// std::invalid_argument if either hypothesis has no trials.
RocCurve empirical_roc(const TrialLog& log, DetectorKind detector);

/// P_D with the threshold at the empirical (1 - target) quantile of the H0
/// statistics. Throws std::invalid_argument when target is outside (0, 1) or
/// fewer than 10 / target H0 trials are available.
double pd_at_pfa(const TrialLog& log, DetectorKind detector, double target_pfa);

struct ComplexityRow {
    DetectorKind detector{DetectorKind::Energy};
    std::size_t m_samples{0};
    std::size_t frames{0};
    OpCount per_frame{};
    OpCount total{};
};

/// Per-detector totals. Throws std::logic_error if a detector's per-frame
/// count varies between frames or departs from its closed form (Energy M,
/// matched filters 2M, Bank 2KM, periodogram 2GM, CANF 10M).
std::vector<ComplexityRow> complexity_report(const TrialLog& log, std::size_t k_filters,
                                             std::size_t periodogram_grid);

/// Closed-form per-frame cost of one detector.
OpCount expected_cost(DetectorKind kind, std::size_t m, std::size_t k_filters,
                      std::size_t periodogram_grid);

}  // namespace sensing
