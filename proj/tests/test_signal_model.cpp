#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sensing/signal_model.hpp"

using namespace sensing;

namespace {

ModelParams default_model() {
    ModelParams p;
    p.m_samples = 64;
    p.omega_bar = 1.9635;
    p.epsilon = 0.98;
    return p;
}

}  // namespace

TEST_CASE("channel gain second moment is 2 sigma_h^2") {
    ModelParams p = default_model();
    for (double s : {1.0, 3.0}) {
        p.sigma_h_sq = s;
        RngStream rng(7);
        double acc = 0.0;
        const int n = 1'000'000;
        for (int i = 0; i < n; ++i) {
            const double h = sample_channel_gain(p, rng);
            REQUIRE(h >= 0.0);
            acc += h * h;
        }
        CHECK(std::abs(acc / n - 2.0 * s) < 0.01 * 2.0 * s);
    }
}

TEST_CASE("channel gain collapses to zero with a vanishing scale") {
    ModelParams p = default_model();
    p.sigma_h_sq = 1e-14;
    RngStream rng(3);
    double largest = 0.0;
    for (int i = 0; i < 10000; ++i) largest = std::max(largest, sample_channel_gain(p, rng));
    CHECK(largest < 1e-5);
}

TEST_CASE("same seed gives the same gain") {
    const ModelParams p = default_model();
    RngStream a(99), b(99);
    CHECK(sample_channel_gain(p, a) == sample_channel_gain(p, b));
}

TEST_CASE("noiseless forced frame is the bare sinusoid") {
    ModelParams p = default_model();
    p.sigma_v_sq = 1e-300;
    const auto frame = simulate_frame_with_latents(p, Hypothesis::H1, 1.0, p.omega_bar, 0.0, RngStream(1));
    REQUIRE(frame.size() == 64);
    for (std::size_t i = 0; i < frame.size(); ++i)
        CHECK(frame.samples[i] == doctest::Approx(std::sin(static_cast<double>(i + 1) * p.omega_bar)).epsilon(1e-15));

    p.sigma_v_sq = 1e-300;
    const auto general = simulate_frame_with_latents(p, Hypothesis::H1, 0.7, 2.1, 1.3, RngStream(2));
    for (std::size_t i = 0; i < general.size(); ++i)
        CHECK(std::abs(general.samples[i] - 0.7 * std::sin(static_cast<double>(i + 1) * 2.1 + 1.3)) < 1e-15);
}

TEST_CASE("H0 frame energy and noise variance") {
    ModelParams p = default_model();
    p.sigma_v_sq = 1.0;
    const RngStream root(11);
    double energy = 0.0;
    const int frames = 100'000;
    for (int i = 0; i < frames; ++i) {
        const auto f = simulate_frame(p, Hypothesis::H0, root.substream("trial", i));
        CHECK_FALSE(f.truth.has_value());
        for (double y : f.samples) energy += y * y;
    }
    CHECK(std::abs(energy / frames - 64.0) < 0.01 * 64.0);

    p.sigma_v_sq = 0.25;
    double sq = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        const auto f = simulate_frame(p, Hypothesis::H0, root.substream("var", i));
        for (double y : f.samples) sq += y * y;
    }
    CHECK(sq / (10'000.0 * 64.0) == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("H1 frequency draws stay in the support and are flat") {
    const ModelParams p = default_model();
    const RngStream root(5);
    constexpr int kBins = 20;
    std::vector<int> hist(kBins, 0);
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        const auto f = simulate_frame(p, Hypothesis::H1, root.substream("trial", i));
        REQUIRE(f.truth.has_value());
        const double w = f.truth->omega;
        REQUIRE(w >= 0.9835);
        REQUIRE(w <= 2.9435);
        REQUIRE(f.truth->theta >= 0.0);
        REQUIRE(f.truth->theta < 2.0 * std::numbers::pi);
        const int bin = std::min(kBins - 1, static_cast<int>((w - p.omega_lo()) / (2.0 * p.epsilon) * kBins));
        ++hist[bin];
    }
    const double expected = static_cast<double>(n) / kBins;
    double chi2 = 0.0;
    for (int count : hist) chi2 += (count - expected) * (count - expected) / expected;
    // chi-square, 19 degrees of freedom, upper 0.1% point
    CHECK(chi2 < 43.82);
}

TEST_CASE("latent forcing respects the support") {
    const ModelParams p = default_model();
    CHECK_NOTHROW(simulate_frame_with_latents(p, Hypothesis::H1, 1.0, 2.45, 0.0, RngStream(1)));
    CHECK_THROWS_AS(simulate_frame_with_latents(p, Hypothesis::H1, 1.0, 3.0, 0.0, RngStream(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_frame_with_latents(p, Hypothesis::H1, -1.0, 2.0, 0.0, RngStream(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_frame_with_latents(p, Hypothesis::H1, 1.0, 2.0, 7.0, RngStream(1)),
                    std::invalid_argument);
}

TEST_CASE("zero gain under H1 reproduces the H0 frame") {
    const ModelParams p = default_model();
    const RngStream rng(42);
    const auto h1 = simulate_frame_with_latents(p, Hypothesis::H1, 0.0, 2.45, 1.0, rng);
    const auto h0 = simulate_frame(p, Hypothesis::H0, rng);
    CHECK(h1.samples == h0.samples);
}

TEST_CASE("frames are deterministic in the seed") {
    const ModelParams p = default_model();
    const auto a = simulate_frame(p, Hypothesis::H1, RngStream(2024));
    const auto b = simulate_frame(p, Hypothesis::H1, RngStream(2024));
    const auto c = simulate_frame(p, Hypothesis::H1, RngStream(2025));
    CHECK(a.samples == b.samples);
    CHECK(a.truth->omega == b.truth->omega);
    CHECK(a.samples != c.samples);
}

TEST_CASE("forcing the frequency leaves gain, phase and noise draws alone") {
    const ModelParams p = default_model();
    const RngStream rng(77);
    const auto drawn = simulate_frame(p, Hypothesis::H1, rng);
    const auto forced =
        simulate_frame_with_latents(p, Hypothesis::H1, drawn.truth->h, 2.45, drawn.truth->theta, rng);
    for (std::size_t i = 0; i < drawn.size(); ++i) {
        const double m = static_cast<double>(i + 1);
        const double noise_a = drawn.samples[i] - drawn.truth->h * std::sin(m * drawn.truth->omega + drawn.truth->theta);
        const double noise_b = forced.samples[i] - forced.truth->h * std::sin(m * 2.45 + forced.truth->theta);
        CHECK(noise_a == doctest::Approx(noise_b).epsilon(1e-12));
    }
}

TEST_CASE("a non-uniform frequency prior can be injected") {
    const ModelParams p = default_model();
    const FrequencyPrior lower_edge = [](RngStream&, double lo, double) { return lo; };
    const auto f = simulate_frame(p, Hypothesis::H1, RngStream(1), lower_edge);
    CHECK(f.truth->omega == p.omega_lo());
}

TEST_CASE("model parameter validation reports every violation") {
    ModelParams p = default_model();
    CHECK(p.violations().empty());
    p.sigma_v_sq = -1.0;
    p.epsilon = 1.5;  // omega_bar + epsilon > pi
    p.costs.c01 = p.costs.c11;
    const auto problems = p.violations();
    CHECK(problems.size() == 3);
    CHECK_THROWS_AS(p.validate(), InvalidParams);
}
