#include "sensing/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace sensing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string join(const std::vector<std::string>& items) {
    std::ostringstream out;
    out << "invalid model parameters:";
    for (const auto& item : items) out << "\n  - " << item;
    return out.str();
}

void add_noise(std::vector<double>& samples, double sigma_v_sq, RngStream noise) {
    const double sd = std::sqrt(sigma_v_sq);
    for (auto& y : samples) y += sd * noise.normal();
}

Frame make_frame(const ModelParams& params, Hypothesis hypothesis, const Latents& latents,
                 const RngStream& rng) {
    Frame frame;
    frame.truth_hypothesis = hypothesis;
    frame.samples.assign(params.m_samples, 0.0);
    if (hypothesis == Hypothesis::H1) {
        for (std::size_t i = 0; i < params.m_samples; ++i) {
            const double m = static_cast<double>(i + 1);
            frame.samples[i] = latents.h * std::sin(m * latents.omega + latents.theta);
        }
        frame.truth = latents;
    }
    add_noise(frame.samples, params.sigma_v_sq, rng.substream("noise"));
    return frame;
}

}  // namespace

const char* to_string(Hypothesis h) { return h == Hypothesis::H0 ? "H0" : "H1"; }

InvalidParams::InvalidParams(std::vector<std::string> problems)
    : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}

std::vector<std::string> ModelParams::violations() const {
    std::vector<std::string> out;
    if (m_samples == 0) out.emplace_back("m_samples must be positive");
    if (!(sigma_v_sq > 0.0) || !std::isfinite(sigma_v_sq))
        out.emplace_back("sigma_v_sq must be positive and finite");
    if (!(sigma_h_sq > 0.0) || !std::isfinite(sigma_h_sq))
        out.emplace_back("sigma_h_sq must be positive and finite");
    if (!(omega_bar > 0.0 && omega_bar < std::numbers::pi))
        out.emplace_back("omega_bar must lie in (0, pi)");
    if (!(epsilon >= 0.0)) out.emplace_back("epsilon must be nonnegative");
    if (!(omega_bar - epsilon > 0.0) || !(omega_bar + epsilon < std::numbers::pi))
        out.emplace_back("frequency support [omega_bar - epsilon, omega_bar + epsilon] must lie inside (0, pi)");
    if (!(p_h0 >= 0.0 && p_h0 <= 1.0)) out.emplace_back("p_h0 must lie in [0, 1]");
    if (!(costs.c10 > costs.c00)) out.emplace_back("costs: c10 must exceed c00");
    if (!(costs.c01 > costs.c11)) out.emplace_back("costs: c01 must exceed c11");
    return out;
}

void ModelParams::validate() const {
    auto problems = violations();
    if (!problems.empty()) throw InvalidParams(std::move(problems));
}

double uniform_frequency_prior(RngStream& rng, double lo, double hi) { return rng.uniform(lo, hi); }

double sample_channel_gain(const ModelParams& params, RngStream& rng) {
    const double u = rng.uniform();
    return std::sqrt(-2.0 * params.sigma_h_sq * std::log1p(-u));
}

Frame simulate_frame(const ModelParams& params, Hypothesis hypothesis, const RngStream& rng,
                     const FrequencyPrior& prior) {
    Latents latents;
    if (hypothesis == Hypothesis::H1) {
        auto gain = rng.substream("gain");
        auto freq = rng.substream("omega");
        auto phase = rng.substream("theta");
        latents.h = sample_channel_gain(params, gain);
        latents.omega = prior(freq, params.omega_lo(), params.omega_hi());
        latents.theta = phase.uniform(0.0, kTwoPi);
    }
    return make_frame(params, hypothesis, latents, rng);
}

Frame simulate_frame_with_latents(const ModelParams& params, Hypothesis hypothesis, double h,
                                  double omega, double theta, const RngStream& rng) {
    if (!(h >= 0.0)) throw std::invalid_argument("channel gain must be nonnegative");
    if (!(omega >= params.omega_lo() && omega <= params.omega_hi())) {
        std::ostringstream msg;
        msg << "omega " << omega << " outside support [" << params.omega_lo() << ", "
            << params.omega_hi() << "]";
        throw std::invalid_argument(msg.str());
    }
    if (!(theta >= 0.0 && theta < kTwoPi)) throw std::invalid_argument("theta must lie in [0, 2 pi)");
    return make_frame(params, hypothesis, Latents{h, omega, theta}, rng);
}

}  // namespace sensing
