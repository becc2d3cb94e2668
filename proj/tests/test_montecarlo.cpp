#include <cmath>
#include <vector>

#include "doctest.h"
#include "sensing/montecarlo.hpp"

using namespace sensing;

namespace {

ExperimentSpec small_spec(std::vector<DetectorKind> detectors, std::size_t n = 200) {
    ExperimentSpec spec;
    spec.model = snr_to_sigma(3.0, ModelParams{});
    spec.notch = NotchParams::for_model(spec.model);
    spec.detectors = std::move(detectors);
    spec.trials_per_hypothesis = n;
    spec.periodogram_grid = 256;
    spec.seed = RngSeed{99};
    spec.threads = 1;
    return spec;
}

// Log with a given statistic per row, first n0 rows under H0.
TrialLog synthetic_log(const std::vector<double>& null_stats, const std::vector<double>& alt_stats) {
    TrialLog log;
    log.detectors = {DetectorKind::Energy};
    for (double s : null_stats) log.rows.push_back({Hypothesis::H0, std::nullopt, {s}, {OpCount{}}, std::nullopt});
    for (double s : alt_stats) log.rows.push_back({Hypothesis::H1, std::nullopt, {s}, {OpCount{}}, std::nullopt});
    return log;
}

}  // namespace

TEST_CASE("SNR to noise variance") {
    ModelParams p;
    CHECK(snr_to_sigma(0.0, p).sigma_v_sq == doctest::Approx(1.0));
    CHECK(snr_to_sigma(3.0, p).sigma_v_sq == doctest::Approx(0.50119).epsilon(1e-5));
    CHECK(snr_to_sigma(6.0, p).sigma_v_sq == doctest::Approx(0.25119).epsilon(1e-5));
    p.sigma_h_sq = 2.0;
    CHECK(snr_to_sigma(0.0, p).sigma_v_sq == doctest::Approx(2.0));
}

TEST_CASE("operating points rescale steps and seeds") {
    ExperimentSpec spec;
    const auto a = at_operating_point(spec, 3.0, 128);
    CHECK(a.model.m_samples == 128);
    CHECK(a.notch.mu_beta == doctest::Approx(spec.notch.mu_beta / 2.0));
    CHECK(a.operating_snr_db == 3.0);
    const auto b = at_operating_point(spec, 6.0, 128);
    const auto c = at_operating_point(spec, 3.0, 64);
    CHECK(a.seed.value != b.seed.value);
    CHECK(a.seed.value != c.seed.value);
}

TEST_CASE("trial log layout") {
    const auto log = run_trials(small_spec({}, 150));
    CHECK(log.rows.size() == 300);
    CHECK(log.rows.front().statistics.empty());
    CHECK(log.rows[149].hypothesis == Hypothesis::H0);
    CHECK(log.rows[150].hypothesis == Hypothesis::H1);
    CHECK(log.rows[150].truth->omega == 2.45);
}

TEST_CASE("trials are reproducible and independent of the thread count") {
    auto spec = small_spec({DetectorKind::Energy, DetectorKind::CANF, DetectorKind::Bank});
    const auto a = run_trials(spec);
    const auto b = run_trials(spec);
    spec.threads = 4;
    const auto c = run_trials(spec);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].statistics == b.rows[i].statistics);
        CHECK(a.rows[i].statistics == c.rows[i].statistics);
        CHECK(a.rows[i].omega_hat == c.rows[i].omega_hat);
    }
}

TEST_CASE("energy statistic mean under H0") {
    auto spec = small_spec({DetectorKind::Energy}, 10'000);
    const auto log = run_trials(spec);
    double mean = 0.0;
    for (double t : log.statistics(DetectorKind::Energy, Hypothesis::H0)) mean += t;
    mean /= 10'000.0;
    CHECK(std::abs(mean - 64.0 * spec.model.sigma_v_sq) < 0.02 * 64.0 * spec.model.sigma_v_sq);
}

TEST_CASE("random frequencies when none is fixed") {
    auto spec = small_spec({DetectorKind::MatchedOracle});
    spec.fixed_omega.reset();
    const auto log = run_trials(spec);
    CHECK(log.rows[200].truth->omega != log.rows[201].truth->omega);
}

TEST_CASE("detector failures carry the trial index") {
    auto spec = small_spec({DetectorKind::CANF});
    spec.model.m_samples = 2;  // too short for the notch filter
    try {
        run_trials(spec);
        FAIL("expected TrialError");
    } catch (const TrialError& e) {
        CHECK(e.trial_index() == 0);
    }
}

TEST_CASE("ROC of an ideal detector") {
    const auto roc = empirical_roc(synthetic_log({0, 1, 2, 3}, {10, 11, 12}), DetectorKind::Energy);
    bool through_corner = false;
    for (const auto& pt : roc.points) through_corner |= (pt.p_fa == 0.0 && pt.p_d == 1.0);
    CHECK(through_corner);
    CHECK(roc.points.front().p_fa == 0.0);
    CHECK(roc.points.front().p_d == 0.0);
    CHECK(roc.points.back().p_fa == 1.0);
    CHECK(roc.points.back().p_d == 1.0);
}

TEST_CASE("ROC of a constant statistic is the diagonal") {
    const auto roc = empirical_roc(synthetic_log({5, 5, 5}, {5, 5}), DetectorKind::Energy);
    REQUIRE(roc.points.size() == 2);
    CHECK(roc.points[1].p_fa == 1.0);
    CHECK(roc.points[1].p_d == 1.0);
}

TEST_CASE("ROC of a label-blind statistic hugs the diagonal") {
    RngStream rng(8);
    std::vector<double> a(5000), b(5000);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    const auto roc = empirical_roc(synthetic_log(a, b), DetectorKind::Energy);
    double worst = 0.0;
    for (std::size_t i = 1; i < roc.points.size(); ++i) {
        const auto& pt = roc.points[i];
        CHECK(pt.p_fa >= roc.points[i - 1].p_fa);
        CHECK(pt.p_d >= roc.points[i - 1].p_d);
        CHECK(pt.p_fa <= 1.0);
        CHECK(pt.p_d <= 1.0);
        worst = std::max(worst, std::abs(pt.p_d - pt.p_fa));
    }
    // Two-sample Kolmogorov-Smirnov critical value at alpha = 0.001.
    CHECK(worst < 1.95 * std::sqrt(2.0 / 5000.0));
}

TEST_CASE("ROC needs both classes") {
    CHECK_THROWS_AS(empirical_roc(synthetic_log({1, 2}, {}), DetectorKind::Energy), std::invalid_argument);
    CHECK_THROWS_AS(empirical_roc(synthetic_log({1, 2}, {3}), DetectorKind::CANF), std::out_of_range);
}

TEST_CASE("P_D at fixed P_FA") {
    std::vector<double> null_stats(1000), alt_stats(1000);
    for (std::size_t i = 0; i < 1000; ++i) {
        null_stats[i] = static_cast<double>(i);
        alt_stats[i] = 5000.0 + static_cast<double>(i);
    }
    CHECK(pd_at_pfa(synthetic_log(null_stats, alt_stats), DetectorKind::Energy, 0.1) == 1.0);

    RngStream rng(12);
    std::vector<double> a(20000), b(20000);
    for (auto& x : a) x = rng.normal();
    for (auto& x : b) x = rng.normal();
    const double pd = pd_at_pfa(synthetic_log(a, b), DetectorKind::Energy, 0.1);
    CHECK(std::abs(pd - 0.1) < 3.0 * std::sqrt(0.1 * 0.9 / 20000.0));

    CHECK_THROWS_AS(pd_at_pfa(synthetic_log(std::vector<double>(99, 0.0), {1.0}), DetectorKind::Energy, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(pd_at_pfa(synthetic_log(null_stats, alt_stats), DetectorKind::Energy, 1.0), std::invalid_argument);
}

TEST_CASE("complexity report") {
    auto spec = small_spec({DetectorKind::Energy, DetectorKind::MatchedNominal, DetectorKind::MatchedOracle,
                            DetectorKind::Bank, DetectorKind::PeriodogramGLRT, DetectorKind::CANF},
                           100);
    const auto rows = complexity_report(run_trials(spec), spec.k_filters, spec.periodogram_grid);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].per_frame == OpCount{64, 64, 0});
    CHECK(rows[1].per_frame == OpCount{128, 128, 0});
    CHECK(rows[2].per_frame == OpCount{128, 128, 0});
    CHECK(rows[3].per_frame == OpCount{2560, 2560, 20});
    CHECK(rows[4].per_frame == OpCount{2 * 64 * 256, 2 * 64 * 256, 0});
    CHECK(rows[5].per_frame == OpCount{640, 640, 0});
    CHECK(rows[3].per_frame.complex_mults / rows[5].per_frame.complex_mults == 4);
    CHECK(rows[3].per_frame.complex_mults % rows[5].per_frame.complex_mults == 0);
    CHECK(rows[0].total.complex_mults == 64 * 200);
}

TEST_CASE("detector names round-trip") {
    for (auto kind : kAllDetectors) CHECK(parse_detector(to_string(kind)) == kind);
    CHECK_FALSE(parse_detector("radiometer").has_value());
}

TEST_CASE("experiment validation") {
    auto spec = small_spec({DetectorKind::Energy});
    CHECK(spec.violations().empty());
    spec.trials_per_hypothesis = 10;
    spec.fixed_omega = 3.05;
    CHECK(spec.violations().size() == 2);
    CHECK_THROWS_AS(run_trials(spec), InvalidParams);
}
