#include "sensing/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

namespace sensing {

namespace {

struct DetectorName {
    DetectorKind kind;
    std::string_view name;
};

constexpr DetectorName kNames[] = {
    {DetectorKind::Energy, "energy"},
    {DetectorKind::MatchedNominal, "matched_nominal"},
    {DetectorKind::MatchedOracle, "matched_oracle"},
    {DetectorKind::Bank, "bank"},
    {DetectorKind::PeriodogramGLRT, "periodogram_glrt"},
    {DetectorKind::CANF, "canf"},
};

std::size_t worker_count(std::size_t requested, std::size_t work) {
    std::size_t n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(work, 1));
}

Frame draw_frame(const ExperimentSpec& spec, Hypothesis hypothesis, const RngStream& trial) {
    if (hypothesis == Hypothesis::H1 && spec.fixed_omega) {
        auto gain = trial.substream("gain");
        auto phase = trial.substream("theta");
        const double h = sample_channel_gain(spec.model, gain);
        const double theta = phase.uniform(0.0, 2.0 * std::numbers::pi);
        return simulate_frame_with_latents(spec.model, hypothesis, h, *spec.fixed_omega, theta, trial);
    }
    return simulate_frame(spec.model, hypothesis, trial);
}

// Frequency handed to the oracle detector. H0 frames carry no pilot; the
// oracle then uses the fixed frequency, or a prior draw when there is none.
double oracle_frequency(const ExperimentSpec& spec, const Frame& frame, const RngStream& trial) {
    if (frame.truth) return frame.truth->omega;
    if (spec.fixed_omega) return *spec.fixed_omega;
    auto stream = trial.substream("oracle_omega");
    return uniform_frequency_prior(stream, spec.model.omega_lo(), spec.model.omega_hi());
}

TrialRow run_one(const ExperimentSpec& spec, const BankConfig& bank, double log_gamma,
                 std::size_t index) {
    const Hypothesis hypothesis =
        index < spec.trials_per_hypothesis ? Hypothesis::H0 : Hypothesis::H1;
    const RngStream trial(mix_seed(spec.seed.value, index));
    const Frame frame = draw_frame(spec, hypothesis, trial);

    TrialRow row;
    row.hypothesis = hypothesis;
    row.truth = frame.truth;
    row.statistics.reserve(spec.detectors.size());
    row.op_counts.reserve(spec.detectors.size());
    for (DetectorKind kind : spec.detectors) {
        DetectorOutput out;
        switch (kind) {
            case DetectorKind::Energy:
                out = energy_detector(frame, static_cast<double>(frame.size()) * spec.model.sigma_v_sq);
                break;
            case DetectorKind::MatchedNominal:
                out = matched_filter_detector(frame, spec.model, spec.model.omega_bar, log_gamma);
                break;
            case DetectorKind::MatchedOracle:
                out = matched_filter_detector(frame, spec.model, oracle_frequency(spec, frame, trial),
                                              log_gamma);
                break;
            case DetectorKind::Bank:
                out = bank_detector(frame, spec.model, bank, log_gamma);
                break;
            case DetectorKind::PeriodogramGLRT:
                out = periodogram_detector(frame, spec.model, spec.periodogram_grid, log_gamma);
                break;
            case DetectorKind::CANF: {
                const auto est = estimate_frequency(frame, spec.model, spec.notch);
                const double t = log_lr_case2(frame, spec.model, est.omega_hat);
                out = {t, decide(t, log_gamma),
                       est.op_count + mac_cost(2 * static_cast<std::int64_t>(frame.size()))};
                row.omega_hat = est.omega_hat;
                break;
            }
        }
        row.statistics.push_back(out.statistic);
        row.op_counts.push_back(out.op_count);
    }
    return row;
}

}  // namespace

const char* to_string(DetectorKind kind) {
    for (const auto& entry : kNames)
        if (entry.kind == kind) return entry.name.data();
    return "unknown";
}

std::optional<DetectorKind> parse_detector(std::string_view name) {
    for (const auto& entry : kNames)
        if (entry.name == name) return entry.kind;
    return std::nullopt;
}

std::vector<std::string> ExperimentSpec::violations() const {
    auto out = model.violations();
    for (auto& problem : notch.violations()) out.push_back("notch: " + problem);
    if (k_filters == 0) out.emplace_back("k_filters must be positive");
    if (trials_per_hypothesis < 100) out.emplace_back("trials_per_hypothesis must be at least 100");
    if (periodogram_grid < 2) out.emplace_back("periodogram_grid must be at least 2");
    if (!(target_pfa > 0.0 && target_pfa < 1.0)) out.emplace_back("target_pfa must lie in (0, 1)");
    if (step_reference_length == 0) out.emplace_back("step_reference_length must be positive");
    for (std::size_t m : frame_lengths)
        if (m < 3) out.emplace_back("frame lengths must be at least 3");
    if (fixed_omega && !(*fixed_omega >= model.omega_lo() && *fixed_omega <= model.omega_hi()))
        out.emplace_back("fixed_omega must lie in [omega_bar - epsilon, omega_bar + epsilon]");
    for (double snr : snr_db)
        if (!std::isfinite(snr)) out.emplace_back("snr_db entries must be finite");
    return out;
}

void ExperimentSpec::validate() const {
    auto problems = violations();
    if (!problems.empty()) throw InvalidParams(std::move(problems));
}

ModelParams snr_to_sigma(double snr_db, const ModelParams& params) {
    ModelParams out = params;
    out.sigma_v_sq = params.sigma_h_sq * std::pow(10.0, -snr_db / 10.0);
    return out;
}

ExperimentSpec at_operating_point(const ExperimentSpec& spec, double snr_db, std::size_t m) {
    ExperimentSpec out = spec;
    out.model = snr_to_sigma(snr_db, spec.model);
    out.model.m_samples = m;
    out.notch = spec.notch.scaled_for_frame_length(m, spec.step_reference_length);
    out.operating_snr_db = snr_db;
    const auto snr_key = static_cast<std::uint64_t>(std::llround(snr_db * 1000.0));
    out.seed.value = mix_seed(mix_seed(spec.seed.value, snr_key), m);
    return out;
}

TrialError::TrialError(std::size_t trial_index, const std::string& what)
    : std::runtime_error("trial " + std::to_string(trial_index) + ": " + what),
      trial_index_(trial_index) {}

std::size_t TrialLog::column(DetectorKind kind) const {
    const auto it = std::find(detectors.begin(), detectors.end(), kind);
    if (it == detectors.end())
        throw std::out_of_range(std::string("detector not in log: ") + to_string(kind));
    return static_cast<std::size_t>(it - detectors.begin());
}

std::vector<double> TrialLog::statistics(DetectorKind kind, Hypothesis hypothesis) const {
    const std::size_t col = column(kind);
    std::vector<double> out;
    for (const auto& row : rows)
        if (row.hypothesis == hypothesis) out.push_back(row.statistics[col]);
    return out;
}

TrialLog run_trials(const ExperimentSpec& spec) {
    spec.validate();
    const BankConfig bank = spec.bank();
    const double log_gamma = std::log(bayes_threshold(spec.model));
    const std::size_t total = 2 * spec.trials_per_hypothesis;

    TrialLog log;
    log.detectors = spec.detectors;
    log.m_samples = spec.model.m_samples;
    log.snr_db = spec.operating_snr_db;
    log.rows.resize(total);

    const std::size_t workers = worker_count(spec.threads, total);
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](std::size_t worker) {
        // Strided assignment; a worker stops at its first failure.
        for (std::size_t i = worker; i < total; i += workers) {
            try {
                log.rows[i] = run_one(spec, bank, log_gamma, i);
            } catch (const std::exception& e) {
                errors[worker] = std::make_exception_ptr(TrialError(i, e.what()));
                return;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    // Report the lowest failing trial index regardless of scheduling.
    std::exception_ptr first;
    std::size_t first_index = total;
    for (const auto& err : errors) {
        if (!err) continue;
        try {
            std::rethrow_exception(err);
        } catch (const TrialError& e) {
            if (e.trial_index() < first_index) {
                first_index = e.trial_index();
                first = err;
            }
        }
    }
    if (first) std::rethrow_exception(first);
    return log;
}

RocCurve empirical_roc(const TrialLog& log, DetectorKind detector) {
    const std::size_t col = log.column(detector);
    std::vector<std::pair<double, bool>> scored;  // (statistic, is H1)
    scored.reserve(log.rows.size());
    std::size_t n1 = 0;
    for (const auto& row : log.rows) {
        const bool h1 = row.hypothesis == Hypothesis::H1;
        n1 += h1 ? 1 : 0;
        scored.emplace_back(row.statistics[col], h1);
    }
    const std::size_t n0 = scored.size() - n1;
    if (n0 == 0 || n1 == 0) throw std::invalid_argument("empirical_roc needs trials under both hypotheses");

    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    RocCurve curve;
    curve.detector = detector;
    curve.snr_db = log.snr_db;
    curve.points.push_back({0.0, 0.0});
    std::size_t fa = 0;
    std::size_t det = 0;
    for (std::size_t i = 0; i < scored.size();) {
        // Threshold at this value admits every tied trial at once.
        const double tau = scored[i].first;
        for (; i < scored.size() && scored[i].first == tau; ++i) (scored[i].second ? det : fa) += 1;
        curve.points.push_back(
            {static_cast<double>(fa) / static_cast<double>(n0), static_cast<double>(det) / static_cast<double>(n1)});
    }
    return curve;
}

double pd_at_pfa(const TrialLog& log, DetectorKind detector, double target_pfa) {
    if (!(target_pfa > 0.0 && target_pfa < 1.0))
        throw std::invalid_argument("target P_FA must lie in (0, 1)");
    auto null_stats = log.statistics(detector, Hypothesis::H0);
    const auto alt_stats = log.statistics(detector, Hypothesis::H1);
    if (static_cast<double>(null_stats.size()) < 10.0 / target_pfa) {
        std::ostringstream msg;
        msg << "pd_at_pfa: " << null_stats.size() << " H0 trials cannot resolve P_FA = " << target_pfa;
        throw std::invalid_argument(msg.str());
    }
    if (alt_stats.empty()) throw std::invalid_argument("pd_at_pfa: no H1 trials");

    // tau is the k-th largest H0 statistic with k = floor(target * n0), so
    // exactly k null trials reach it when there are no ties.
    std::sort(null_stats.begin(), null_stats.end());
    const auto n0 = null_stats.size();
    const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(target_pfa * static_cast<double>(n0))));
    const double tau = null_stats[n0 - k];
    const auto hits = std::count_if(alt_stats.begin(), alt_stats.end(), [tau](double t) { return t >= tau; });
    return static_cast<double>(hits) / static_cast<double>(alt_stats.size());
}

OpCount expected_cost(DetectorKind kind, std::size_t m, std::size_t k_filters,
                      std::size_t periodogram_grid) {
    const auto mm = static_cast<std::int64_t>(m);
    switch (kind) {
        case DetectorKind::Energy: return mac_cost(mm);
        case DetectorKind::MatchedNominal:
        case DetectorKind::MatchedOracle: return mac_cost(2 * mm);
        case DetectorKind::Bank: {
            OpCount ops = mac_cost(2 * mm * static_cast<std::int64_t>(k_filters));
            ops.mixture_ops = static_cast<std::int64_t>(k_filters);
            return ops;
        }
        case DetectorKind::PeriodogramGLRT:
            return mac_cost(2 * mm * static_cast<std::int64_t>(periodogram_grid));
        case DetectorKind::CANF: return mac_cost(10 * mm);
    }
    return {};
}

std::vector<ComplexityRow> complexity_report(const TrialLog& log, std::size_t k_filters,
                                             std::size_t periodogram_grid) {
    std::vector<ComplexityRow> out;
    for (std::size_t col = 0; col < log.detectors.size(); ++col) {
        ComplexityRow row;
        row.detector = log.detectors[col];
        row.m_samples = log.m_samples;
        row.frames = log.rows.size();
        const OpCount expected = expected_cost(row.detector, log.m_samples, k_filters, periodogram_grid);
        for (const auto& trial : log.rows) {
            if (trial.op_counts[col] != expected)
                throw std::logic_error(std::string("operation count mismatch for ") + to_string(row.detector));
            row.total += trial.op_counts[col];
        }
        row.per_frame = expected;
        out.push_back(row);
    }
    return out;
}

}  // namespace sensing
