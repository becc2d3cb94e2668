#pragma once

#include <filesystem>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sensing/config.hpp"

namespace sensing {

inline constexpr const char* kSnrDefinition = "snr = sigma_h_sq / sigma_v_sq (mean pilot power E[h^2]/2 over noise variance)";

/// Names accepted by run_preset, in display order.
const std::vector<std::string>& preset_names();

struct OutputFile {
    std::string kind;
    std::filesystem::path path;
};

struct RunManifest {
    std::string preset;
    std::string version;
    std::uint64_t seed{0};
    nlohmann::json config;  // resolved snapshot, re-validates to the same spec
    std::map<std::string, std::string> provenance;
    std::vector<OutputFile> outputs;
    double wall_clock_seconds{0.0};

    nlohmann::json to_json() const;
};

/// The preset's layer from <preset_directory>/<name>.json. Throws ConfigError
/// for unknown names.
ConfigLayer preset_layer(std::string_view name);

/// Default, preset and then `overrides` layers, resolved.
ResolvedConfig resolve_preset(std::string_view name, const std::vector<ConfigLayer>& overrides);

using ProgressFn = std::function<void(const std::string&)>;

/// Runs a preset and writes its CSVs plus manifest.json into `out_dir`
/// (created if missing).
RunManifest run_preset(std::string_view name, const std::vector<ConfigLayer>& overrides,
                       const std::filesystem::path& out_dir, const ProgressFn& progress = {});

}  // namespace sensing
