#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sensing/montecarlo.hpp"

namespace sensing {

/// Configuration rejected; carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// One source of settings. Later layers override earlier ones key by key.
struct ConfigLayer {
    nlohmann::json values;
    std::string source;  // e.g. "default", "preset", "config", "flag"
};

struct ResolvedConfig {
    ExperimentSpec spec;
    nlohmann::json snapshot;                        // every key, fully resolved
    std::map<std::string, std::string> provenance;  // "/model/epsilon" -> source
};

/// Directory holding base.json and the per-preset files. SENSING_PRESET_DIR
/// overrides the path compiled in.
std::filesystem::path preset_directory();

/// The reference setup from base.json, used as the "default" layer.
nlohmann::json load_defaults();

/// Parses structured text (JSON) into a layer. Empty or whitespace-only text
/// is an empty layer. Throws ConfigError on syntax errors.
ConfigLayer parse_layer(std::string_view raw, std::string source);

/// Merges the default layer with `layers`, rejects unknown keys and wrong
/// types, and validates the resulting experiment.
ResolvedConfig resolve_config(const std::vector<ConfigLayer>& layers);

/// validate_config on a single user document layered over the defaults.
ResolvedConfig validate_config(std::string_view raw);

/// The configuration document describing `spec` (same schema as the input).
nlohmann::json to_json(const ExperimentSpec& spec);

}  // namespace sensing
