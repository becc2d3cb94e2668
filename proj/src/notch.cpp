#include "sensing/notch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sensing {

namespace {

std::string diverged_message(std::size_t index) {
    std::ostringstream msg;
    msg << "notch filter diverged at sample " << index;
    return msg.str();
}

}  // namespace

FilterDiverged::FilterDiverged(std::size_t sample_index)
    : std::runtime_error(diverged_message(sample_index)), sample_index_(sample_index) {}

NotchParams NotchParams::for_model(const ModelParams& model, double mu_beta, double mu_rho,
                                   double rho_min, double rho_max) {
    NotchParams notch;
    notch.mu_beta = mu_beta;
    notch.mu_rho = mu_rho;
    notch.rho_min = rho_min;
    notch.rho_max = rho_max;
    // cos is monotone on (0, pi) but the direction of the image depends on
    // which side of pi/2 the support sits, so store the sorted pair.
    const double a = -2.0 * std::cos(model.omega_lo());
    const double b = -2.0 * std::cos(model.omega_hi());
    notch.beta_lo = std::min(a, b);
    notch.beta_hi = std::max(a, b);
    return notch;
}

NotchParams NotchParams::scaled_for_frame_length(std::size_t m, std::size_t reference_length) const {
    NotchParams out = *this;
    const double factor = static_cast<double>(reference_length) / static_cast<double>(m);
    out.mu_beta *= factor;
    out.mu_rho *= factor;
    return out;
}

std::vector<std::string> NotchParams::violations() const {
    std::vector<std::string> out;
    if (!(mu_beta > 0.0)) out.emplace_back("mu_beta must be positive");
    if (!(mu_rho > 0.0)) out.emplace_back("mu_rho must be positive");
    if (!(rho_min > 0.0 && rho_min < 1.0)) out.emplace_back("rho_min must lie in (0, 1)");
    if (!(rho_max > 0.0 && rho_max < 1.0)) out.emplace_back("rho_max must lie in (0, 1)");
    if (!(rho_min <= rho_max)) out.emplace_back("rho_min must not exceed rho_max");
    if (!(beta_lo <= beta_hi)) out.emplace_back("beta_lo must not exceed beta_hi");
    if (!(beta_lo >= -2.0 && beta_hi <= 2.0)) out.emplace_back("beta bounds must lie in [-2, 2]");
    return out;
}

void NotchParams::validate() const {
    auto problems = violations();
    if (!problems.empty()) throw InvalidParams(std::move(problems));
}

NotchState init_state(const ModelParams& model, const NotchParams& notch) {
    NotchState state;
    state.beta = std::clamp(-2.0 * std::cos(model.omega_bar), notch.beta_lo, notch.beta_hi);
    state.rho = std::clamp(1.0 - 2.0 * model.epsilon / std::numbers::pi, notch.rho_min, notch.rho_max);
    return state;
}

StepResult step(const NotchState& state, double y, const NotchParams& notch) {
    const double beta = state.beta;
    const double rho = state.rho;
    const double s = y + beta * state.y1 + state.y2 - rho * beta * state.s1 - rho * rho * state.s2;
    if (!std::isfinite(s)) throw FilterDiverged(state.m + 1);

    // Instantaneous gradients of s^2(m); s(m-1), s(m-2) are treated as
    // constants with respect to beta and rho.
    const double beta_next = beta - 2.0 * notch.mu_beta * s * (state.y1 - rho * state.s1);
    const double rho_next = rho + 2.0 * notch.mu_rho * s * (beta_next * state.s1 + 2.0 * rho * state.s2) +
                            notch.mu_rho / (rho * rho);
    if (!std::isfinite(beta_next) || !std::isfinite(rho_next)) throw FilterDiverged(state.m + 1);

    StepResult out;
    out.output = s;
    out.state.beta = std::clamp(beta_next, notch.beta_lo, notch.beta_hi);
    out.state.rho = std::clamp(rho_next, notch.rho_min, notch.rho_max);
    out.state.s2 = state.s1;
    out.state.s1 = s;
    out.state.y2 = state.y1;
    out.state.y1 = y;
    out.state.m = state.m + 1;
    return out;
}

double omega_from_beta(double beta) { return std::acos(std::clamp(-0.5 * beta, -1.0, 1.0)); }

FrequencyEstimate estimate_frequency(const Frame& frame, const ModelParams& model,
                                     const NotchParams& notch) {
    if (frame.size() < 3) throw std::invalid_argument("estimate_frequency needs at least 3 samples");
    NotchState state = init_state(model, notch);
    for (double y : frame.samples) state = step(state, y, notch).state;

    FrequencyEstimate est;
    est.beta_final = state.beta;
    est.rho_final = state.rho;
    est.omega_hat = omega_from_beta(state.beta);
    for (std::size_t i = 0; i < frame.size(); ++i) est.op_count += kNotchStepCost;
    return est;
}

DetectorOutput canf_detector(const Frame& frame, const ModelParams& model, const NotchParams& notch,
                             double log_threshold) {
    const auto est = estimate_frequency(frame, model, notch);
    const double t = log_lr_case2(frame, model, est.omega_hat);
    return {t, decide(t, log_threshold),
            est.op_count + mac_cost(2 * static_cast<std::int64_t>(frame.size()))};
}

DetectorOutput canf_detect(const Frame& frame, const ModelParams& model, const NotchParams& notch) {
    return canf_detector(frame, model, notch, std::log(bayes_threshold(model)));
}

}  // namespace sensing
