#include "sensing/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "sensing/csv.hpp"

namespace sensing {

namespace {

using nlohmann::json;

std::string snr_label(double snr_db) { return format_number(snr_db) + "dB"; }

void note(const ProgressFn& progress, const std::string& msg) {
    if (progress) progress(msg);
}

double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    if (values.empty()) return std::nan("");
    // Linear interpolation between order statistics.
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

void run_freq_error(const ExperimentSpec& spec, const std::filesystem::path& dir, RunManifest& manifest,
                    const ProgressFn& progress) {
    if (std::find(spec.detectors.begin(), spec.detectors.end(), DetectorKind::CANF) == spec.detectors.end())
        throw ConfigError({"/experiment/detectors: fig2_freq_error needs the canf detector"});
    const std::size_t m = spec.frame_lengths.empty() ? spec.model.m_samples : spec.frame_lengths.front();

    CsvWriter trials(dir / "freq_error.csv",
                     {"snr_db", "trial", "omega_true", "omega_hat", "abs_error", "normalized_error"});
    CsvWriter summary(dir / "freq_error_summary.csv",
                      {"snr_db", "n", "median_normalized_error", "q25_normalized_error", "q75_normalized_error"});
    for (double snr : spec.snr_db) {
        note(progress, "fig2_freq_error: snr " + snr_label(snr));
        const auto log = run_trials(at_operating_point(spec, snr, m));
        std::vector<double> errors;
        long long index = 0;
        for (const auto& row : log.rows) {
            if (row.hypothesis != Hypothesis::H1) continue;
            const double truth = row.truth->omega;
            const double err = std::abs(*row.omega_hat - truth);
            errors.push_back(err / truth);
            trials.field(snr).field(index++).field(truth).field(*row.omega_hat).field(err).field(err / truth);
            trials.end_row();
        }
        summary.field(snr)
            .field(static_cast<long long>(errors.size()))
            .field(quantile(errors, 0.5))
            .field(quantile(errors, 0.25))
            .field(quantile(errors, 0.75));
        summary.end_row();
    }
    manifest.outputs.push_back({"freq_error", trials.path()});
    manifest.outputs.push_back({"freq_error_summary", summary.path()});
}

void run_roc(const ExperimentSpec& spec, const std::filesystem::path& dir, RunManifest& manifest,
             const ProgressFn& progress) {
    const std::size_t m = spec.frame_lengths.empty() ? spec.model.m_samples : spec.frame_lengths.front();
    CsvWriter pd(dir / "roc_pd_at_pfa.csv", {"detector", "snr_db", "n", "target_pfa", "p_d"});
    for (double snr : spec.snr_db) {
        note(progress, "fig3_roc: snr " + snr_label(snr));
        const auto log = run_trials(at_operating_point(spec, snr, m));
        CsvWriter roc(dir / ("roc_snr_" + snr_label(snr) + ".csv"), {"detector", "p_fa", "p_d"});
        for (DetectorKind kind : spec.detectors) {
            for (const auto& point : empirical_roc(log, kind).points) {
                roc.field(to_string(kind)).field(point.p_fa).field(point.p_d);
                roc.end_row();
            }
            pd.field(to_string(kind)).field(snr).field(static_cast<long long>(m)).field(spec.target_pfa)
                .field(pd_at_pfa(log, kind, spec.target_pfa));
            pd.end_row();
        }
        manifest.outputs.push_back({"roc", roc.path()});
    }
    manifest.outputs.push_back({"pd_at_pfa", pd.path()});
}

void run_pd_vs_m(const ExperimentSpec& spec, const std::filesystem::path& dir, RunManifest& manifest,
                 const ProgressFn& progress) {
    CsvWriter out(dir / "pd_vs_m.csv", {"detector", "snr_db", "n", "target_pfa", "p_d"});
    for (double snr : spec.snr_db) {
        for (std::size_t m : spec.frame_lengths) {
            note(progress, "fig4_pd_vs_m: snr " + snr_label(snr) + ", n " + std::to_string(m));
            const auto log = run_trials(at_operating_point(spec, snr, m));
            for (DetectorKind kind : spec.detectors) {
                out.field(to_string(kind)).field(snr).field(static_cast<long long>(m)).field(spec.target_pfa)
                    .field(pd_at_pfa(log, kind, spec.target_pfa));
                out.end_row();
            }
        }
    }
    manifest.outputs.push_back({"pd_vs_m", out.path()});
}

void run_complexity(const ExperimentSpec& spec, const std::filesystem::path& dir, RunManifest& manifest,
                    const ProgressFn& progress) {
    CsvWriter out(dir / "complexity.csv",
                  {"detector", "m", "complex_mults", "complex_adds", "mixture_ops", "mults_over_canf"});
    const double snr = spec.snr_db.empty() ? 0.0 : spec.snr_db.front();
    for (std::size_t m : spec.frame_lengths) {
        note(progress, "complexity_table: n " + std::to_string(m));
        const auto log = run_trials(at_operating_point(spec, snr, m));
        const auto canf = expected_cost(DetectorKind::CANF, m, spec.k_filters, spec.periodogram_grid);
        for (const auto& row : complexity_report(log, spec.k_filters, spec.periodogram_grid)) {
            out.field(to_string(row.detector))
                .field(static_cast<long long>(m))
                .field(static_cast<long long>(row.per_frame.complex_mults))
                .field(static_cast<long long>(row.per_frame.complex_adds))
                .field(static_cast<long long>(row.per_frame.mixture_ops))
                .field(static_cast<double>(row.per_frame.complex_mults) / static_cast<double>(canf.complex_mults));
            out.end_row();
        }
    }
    manifest.outputs.push_back({"complexity", out.path()});
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig2_freq_error", "fig3_roc", "fig4_pd_vs_m", "complexity_table"};
    return names;
}

ConfigLayer preset_layer(std::string_view name) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw ConfigError({"unknown preset '" + std::string(name) + "'"});
    const auto path = preset_directory() / (std::string(name) + ".json");
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read preset file " + path.string()});
    try {
        return {json::parse(in), "preset"};
    } catch (const json::parse_error& e) {
        throw ConfigError({path.string() + ": " + e.what()});
    }
}

ResolvedConfig resolve_preset(std::string_view name, const std::vector<ConfigLayer>& overrides) {
    std::vector<ConfigLayer> layers{preset_layer(name)};
    layers.insert(layers.end(), overrides.begin(), overrides.end());
    return resolve_config(layers);
}

json RunManifest::to_json() const {
    json outs = json::array();
    for (const auto& o : outputs) outs.push_back({{"kind", o.kind}, {"path", o.path.filename().string()}});
    return json{{"preset", preset},
                {"version", version},
                {"seed", seed},
                {"snr_definition", kSnrDefinition},
                {"config", config},
                {"provenance", provenance},
                {"outputs", outs},
                {"wall_clock_seconds", wall_clock_seconds}};
}

RunManifest run_preset(std::string_view name, const std::vector<ConfigLayer>& overrides,
                       const std::filesystem::path& out_dir, const ProgressFn& progress) {
    const auto start = std::chrono::steady_clock::now();
    const ResolvedConfig resolved = resolve_preset(name, overrides);
    std::filesystem::create_directories(out_dir);

    RunManifest manifest;
    manifest.preset = std::string(name);
    manifest.version = SENSING_VERSION;
    manifest.seed = resolved.spec.seed.value;
    manifest.config = resolved.snapshot;
    manifest.provenance = resolved.provenance;

    if (name == "fig2_freq_error")
        run_freq_error(resolved.spec, out_dir, manifest, progress);
    else if (name == "fig3_roc")
        run_roc(resolved.spec, out_dir, manifest, progress);
    else if (name == "fig4_pd_vs_m")
        run_pd_vs_m(resolved.spec, out_dir, manifest, progress);
    else
        run_complexity(resolved.spec, out_dir, manifest, progress);

    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream(out_dir / "manifest.json") << manifest.to_json().dump(2) << '\n';
    return manifest;
}

}  // namespace sensing
