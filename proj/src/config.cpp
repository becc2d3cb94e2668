#include "sensing/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sensing {

namespace {

using nlohmann::json;

std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream out;
    out << "invalid configuration:";
    for (const auto& p : problems) out << "\n  - " << p;
    return out.str();
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read " + path.string()});
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({path.string() + ": " + e.what()});
    }
}

// Overlays `layer` onto `merged`, checking every leaf against the shape of
// `schema` (the defaults document).
void overlay(json& merged, const json& layer, const json& schema, const std::string& path,
             const std::string& source, std::map<std::string, std::string>& provenance,
             std::vector<std::string>& problems) {
    if (!layer.is_object()) {
        problems.push_back((path.empty() ? std::string("/") : path) + ": expected an object");
        return;
    }
    for (const auto& [key, value] : layer.items()) {
        const std::string child = path + "/" + key;
        if (!schema.contains(key)) {
            problems.push_back(child + ": unknown key");
            continue;
        }
        const json& expected = schema.at(key);
        if (expected.is_object()) {
            overlay(merged[key], value, expected, child, source, provenance, problems);
            continue;
        }
        const bool ok = expected.is_number() ? value.is_number()
                        : expected.is_array() ? value.is_array()
                        : expected.is_boolean() ? value.is_boolean()
                        : expected.is_string() ? value.is_string()
                                               : true;
        // fixed_omega may be switched off with null
        if (!ok && !(key == "fixed_omega" && value.is_null())) {
            problems.push_back(child + ": expected " + std::string(expected.type_name()) + ", got " +
                               value.type_name());
            continue;
        }
        merged[key] = value;
        provenance[child] = source;
    }
}

void record_defaults(const json& doc, const std::string& path, std::map<std::string, std::string>& provenance) {
    for (const auto& [key, value] : doc.items()) {
        const std::string child = path + "/" + key;
        if (value.is_object())
            record_defaults(value, child, provenance);
        else
            provenance[child] = "default";
    }
}

template <typename T>
T get_field(const json& doc, const char* section, const char* key, std::vector<std::string>& problems) {
    const std::string where = std::string("/") + section + "/" + key;
    try {
        return doc.at(section).at(key).get<T>();
    } catch (const json::exception&) {
        problems.push_back(where + ": has the wrong type or range");
        return T{};
    }
}

std::size_t get_count(const json& doc, const char* section, const char* key,
                      std::vector<std::string>& problems) {
    const json& v = doc.at(section).at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        problems.push_back(std::string("/") + section + "/" + key + ": expected a nonnegative integer");
        return 0;
    }
    return v.get<std::size_t>();
}

ExperimentSpec build_spec(const json& doc, std::vector<std::string>& problems) {
    ExperimentSpec spec;
    ModelParams& model = spec.model;
    model.m_samples = get_count(doc, "model", "m_samples", problems);
    model.sigma_v_sq = get_field<double>(doc, "model", "sigma_v_sq", problems);
    model.sigma_h_sq = get_field<double>(doc, "model", "sigma_h_sq", problems);
    model.omega_bar = get_field<double>(doc, "model", "omega_bar", problems);
    model.epsilon = get_field<double>(doc, "model", "epsilon", problems);
    model.p_h0 = get_field<double>(doc, "model", "p_h0", problems);
    const json& costs = doc.at("model").at("costs");
    model.costs = Costs{costs.at("c00").get<double>(), costs.at("c10").get<double>(),
                        costs.at("c01").get<double>(), costs.at("c11").get<double>()};

    spec.notch = NotchParams::for_model(model, get_field<double>(doc, "notch", "mu_beta", problems),
                                        get_field<double>(doc, "notch", "mu_rho", problems),
                                        get_field<double>(doc, "notch", "rho_min", problems),
                                        get_field<double>(doc, "notch", "rho_max", problems));
    spec.step_reference_length = get_count(doc, "notch", "step_reference_length", problems);
    spec.k_filters = get_count(doc, "bank", "k_filters", problems);

    const json& exp = doc.at("experiment");
    spec.detectors.clear();
    for (const auto& item : exp.at("detectors")) {
        const auto kind = item.is_string() ? parse_detector(item.get<std::string>()) : std::nullopt;
        if (!kind)
            problems.push_back("/experiment/detectors: unknown detector " + item.dump());
        else
            spec.detectors.push_back(*kind);
    }
    spec.snr_db.clear();
    for (const auto& item : exp.at("snr_db")) {
        if (!item.is_number())
            problems.push_back("/experiment/snr_db: entries must be numbers");
        else
            spec.snr_db.push_back(item.get<double>());
    }
    spec.frame_lengths.clear();
    for (const auto& item : exp.at("frame_lengths")) {
        if (!item.is_number_integer() || item.get<long long>() <= 0)
            problems.push_back("/experiment/frame_lengths: entries must be positive integers");
        else
            spec.frame_lengths.push_back(item.get<std::size_t>());
    }
    spec.trials_per_hypothesis = get_count(doc, "experiment", "trials_per_hypothesis", problems);
    if (exp.at("fixed_omega").is_null())
        spec.fixed_omega.reset();
    else
        spec.fixed_omega = exp.at("fixed_omega").get<double>();
    if (!exp.at("seed").is_number_unsigned() && !(exp.at("seed").is_number_integer() && exp.at("seed").get<long long>() >= 0))
        problems.push_back("/experiment/seed: expected an unsigned 64-bit integer");
    else
        spec.seed.value = exp.at("seed").get<std::uint64_t>();
    spec.periodogram_grid = get_count(doc, "experiment", "periodogram_grid", problems);
    spec.target_pfa = get_field<double>(doc, "experiment", "target_pfa", problems);
    spec.threads = get_count(doc, "experiment", "threads", problems);
    return spec;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::filesystem::path preset_directory() {
    if (const char* env = std::getenv("SENSING_PRESET_DIR"); env != nullptr && *env != '\0') return env;
    return SENSING_PRESET_DIR;
}

nlohmann::json load_defaults() { return read_json_file(preset_directory() / "base.json"); }

ConfigLayer parse_layer(std::string_view raw, std::string source) {
    if (raw.find_first_not_of(" \t\r\n") == std::string_view::npos) return {json::object(), std::move(source)};
    try {
        return {json::parse(raw), std::move(source)};
    } catch (const json::parse_error& e) {
        throw ConfigError({source + ": " + e.what()});
    }
}

ResolvedConfig resolve_config(const std::vector<ConfigLayer>& layers) {
    const json defaults = load_defaults();
    ResolvedConfig out;
    out.snapshot = defaults;
    record_defaults(defaults, "", out.provenance);

    std::vector<std::string> problems;
    for (const auto& layer : layers)
        overlay(out.snapshot, layer.values, defaults, "", layer.source, out.provenance, problems);
    if (!problems.empty()) throw ConfigError(std::move(problems));

    out.spec = build_spec(out.snapshot, problems);
    for (auto& violation : out.spec.violations()) problems.push_back(violation);
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return out;
}

ResolvedConfig validate_config(std::string_view raw) { return resolve_config({parse_layer(raw, "config")}); }

nlohmann::json to_json(const ExperimentSpec& spec) {
    json detectors = json::array();
    for (auto kind : spec.detectors) detectors.push_back(to_string(kind));
    const auto& m = spec.model;
    return json{
        {"model",
         {{"m_samples", m.m_samples},
          {"sigma_v_sq", m.sigma_v_sq},
          {"sigma_h_sq", m.sigma_h_sq},
          {"omega_bar", m.omega_bar},
          {"epsilon", m.epsilon},
          {"p_h0", m.p_h0},
          {"costs", {{"c00", m.costs.c00}, {"c10", m.costs.c10}, {"c01", m.costs.c01}, {"c11", m.costs.c11}}}}},
        {"notch",
         {{"mu_beta", spec.notch.mu_beta},
          {"mu_rho", spec.notch.mu_rho},
          {"rho_min", spec.notch.rho_min},
          {"rho_max", spec.notch.rho_max},
          {"step_reference_length", spec.step_reference_length}}},
        {"bank", {{"k_filters", spec.k_filters}}},
        {"experiment",
         {{"detectors", detectors},
          {"snr_db", spec.snr_db},
          {"frame_lengths", spec.frame_lengths},
          {"trials_per_hypothesis", spec.trials_per_hypothesis},
          {"fixed_omega", spec.fixed_omega ? json(*spec.fixed_omega) : json(nullptr)},
          {"seed", spec.seed.value},
          {"periodogram_grid", spec.periodogram_grid},
          {"target_pfa", spec.target_pfa},
          {"threads", spec.threads}}},
    };
}

}  // namespace sensing
