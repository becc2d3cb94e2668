#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sensing/detectors.hpp"
#include "sensing/signal_model.hpp"

namespace sensing {

/// Constrained adaptive notch filter: a second-order IIR notch
///
///   s(m) = y(m) + b y(m-1) + y(m-2) - r b s(m-1) - r^2 s(m-2)
///
/// whose centre b = -2 cos(w) and pole radius r follow a projected steepest
/// descent on s^2(m) + 1/r. The centre is confined to the image of the
/// frequency support and r to [rho_min, rho_max], so the filter stays stable
/// and the final estimate w = arccos(-b/2) stays inside the support.
struct NotchParams {
    double mu_beta{0.06};
    double mu_rho{0.003};
    double rho_min{0.1};
    double rho_max{0.99};
    double beta_lo{0.0};
    double beta_hi{0.0};

    /// Step sizes and radius bounds with the centre interval derived from
    /// the model's frequency support.
    static NotchParams for_model(const ModelParams& model, double mu_beta = 0.06,
                                 double mu_rho = 0.003, double rho_min = 0.1,
                                 double rho_max = 0.99);

    /// Both step sizes multiplied by reference_length / m.
    NotchParams scaled_for_frame_length(std::size_t m, std::size_t reference_length) const;

    std::vector<std::string> violations() const;
    void validate() const;
};

struct NotchState {
    double beta{0.0};
    double rho{0.0};
    double s1{0.0};  // s(m-1)
    double s2{0.0};  // s(m-2)
    double y1{0.0};  // y(m-1)
    double y2{0.0};  // y(m-2)
    std::size_t m{0};
};

struct StepResult {
    NotchState state;
    double output{0.0};
};

/// The filter output stopped being finite.
class FilterDiverged : public std::runtime_error {
public:
    explicit FilterDiverged(std::size_t sample_index);
    std::size_t sample_index() const { return sample_index_; }

private:
    std::size_t sample_index_;
};

/// Filter, beta update and rho update per sample.
inline constexpr OpCount kNotchStepCost = mac_cost(3) + mac_cost(2) + mac_cost(3);

/// Centre at the nominal frequency, radius 1 - 2 eps / pi (notch bandwidth
/// pi (1 - rho) covering the whole support) clamped to [rho_min, rho_max].
NotchState init_state(const ModelParams& model, const NotchParams& notch);

/// One sample: output from the current (beta, rho), then the projected
/// updates. Throws FilterDiverged when the output is not finite.
StepResult step(const NotchState& state, double y, const NotchParams& notch);

/// arccos(-beta / 2) with the argument clipped to [-1, 1].
double omega_from_beta(double beta);

struct FrequencyEstimate {
    double omega_hat{0.0};
    double beta_final{0.0};
    double rho_final{0.0};
    OpCount op_count{};
};

/// Runs the whole frame through the filter. Frames shorter than 3 samples
/// are rejected with std::invalid_argument.
FrequencyEstimate estimate_frequency(const Frame& frame, const ModelParams& model,
                                     const NotchParams& notch);

/// GLRT with the notch estimate in place of the periodogram peak: log LR_II
/// at omega_hat. Cost is the adaptation plus one matched filter, 10 M.
DetectorOutput canf_detector(const Frame& frame, const ModelParams& model, const NotchParams& notch,
                             double log_threshold);

/// canf_detector against the Bayes threshold of `model`.
DetectorOutput canf_detect(const Frame& frame, const ModelParams& model, const NotchParams& notch);

}  // namespace sensing
