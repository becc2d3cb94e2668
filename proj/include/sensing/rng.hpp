#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sensing {

struct RngSeed {
    std::uint64_t value{0};
};

/// Deterministic random stream. Distribution transforms are implemented here
/// rather than through <random> distributions so that a seed reproduces the
/// same doubles with any standard library.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed), origin_(seed) {}

    /// Uniform in [0, 1), 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

    /// Independent child stream keyed by a tag and an index.
    RngStream substream(std::string_view tag, std::uint64_t index = 0) const;

private:
    std::mt19937_64 engine_;
    std::uint64_t origin_{0};
    bool have_spare_{false};
    double spare_{0.0};
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t hash_tag(std::string_view tag);

}  // namespace sensing
