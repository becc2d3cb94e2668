#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sensing/rng.hpp"

namespace sensing {

enum class Hypothesis { H0, H1 };

const char* to_string(Hypothesis h);

/// Decision costs: c_xy is the cost of deciding H_x when H_y is true.
struct Costs {
    double c00{0.0};
    double c10{1.0};
    double c01{1.0};
    double c11{0.0};
};

struct ModelParams {
    std::size_t m_samples{64};
    double sigma_v_sq{1.0};    // noise variance
    double sigma_h_sq{1.0};    // Rayleigh scale, E[h^2] = 2 sigma_h_sq
    double omega_bar{1.9635};  // nominal pilot frequency, rad/sample
    double epsilon{0.98};      // maximal frequency offset, rad/sample
    double p_h0{0.5};
    Costs costs{};

    double omega_lo() const { return omega_bar - epsilon; }
    double omega_hi() const { return omega_bar + epsilon; }
    double p_h1() const { return 1.0 - p_h0; }

    /// Every violated invariant, empty when valid.
    std::vector<std::string> violations() const;
    /// Throws InvalidParams listing all violations.
    void validate() const;
};

class InvalidParams : public std::invalid_argument {
public:
    explicit InvalidParams(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct Latents {
    double h{0.0};
    double omega{0.0};
    double theta{0.0};
};

struct Frame {
    std::vector<double> samples;  // y(1..M), stored 0-based
    Hypothesis truth_hypothesis{Hypothesis::H0};
    std::optional<Latents> truth;  // set only under H1

    std::size_t size() const { return samples.size(); }
};

/// Draws omega from [lo, hi]. The default prior is uniform.
using FrequencyPrior = std::function<double(RngStream&, double lo, double hi)>;

double uniform_frequency_prior(RngStream& rng, double lo, double hi);

/// Rayleigh draw with density (h / s) exp(-h^2 / 2s), s = sigma_h_sq.
double sample_channel_gain(const ModelParams& params, RngStream& rng);

/// One observation block under the given hypothesis. The gain, frequency,
/// phase and noise come from separate substreams of `rng`, so replacing one
/// latent leaves the other draws unchanged.
Frame simulate_frame(const ModelParams& params, Hypothesis hypothesis, const RngStream& rng,
                     const FrequencyPrior& prior = uniform_frequency_prior);

/// As simulate_frame with the latents pinned. Throws std::invalid_argument when
/// omega is outside [omega_bar - epsilon, omega_bar + epsilon], h < 0 or theta
/// is outside [0, 2 pi).
Frame simulate_frame_with_latents(const ModelParams& params, Hypothesis hypothesis, double h,
                                  double omega, double theta, const RngStream& rng);

}  // namespace sensing
