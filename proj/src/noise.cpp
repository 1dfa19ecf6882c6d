#include "dflow/noise.hpp"

#include "dflow/error.hpp"
#include "dflow/rng.hpp"

namespace dflow {

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"gauss1-drift0", "gauss4-drift0",
                                                "gauss2-drift1", "gauss2-drift2"};
    return names;
}

NoisePreset preset_from_name(const std::string& name) {
    if (name == "gauss1-drift0") return {1.0, 0.0};
    if (name == "gauss4-drift0") return {4.0, 0.0};
    if (name == "gauss2-drift1") return {2.0, 1.0};
    if (name == "gauss2-drift2") return {2.0, 2.0};
    if (name == "none") return {0.0, 0.0};
    std::string known = "none";
    for (const auto& n : preset_names()) known += ", " + n;
    throw ConfigError("unknown noise preset '" + name + "' (known: " + known + ")");
}

std::vector<Vec2> random_walk(int len, double sigma, std::uint64_t seed) {
    if (len < 1) throw InvalidLength("random_walk needs len >= 1");
    if (sigma < 0.0) throw InvariantViolation("random_walk sigma must be >= 0");
    std::vector<Vec2> offsets(len, Vec2{0.0, 0.0});
    Rng rng(seed, rng_stream::kGaussWalk);
    for (int t = 1; t < len; ++t) {
        offsets[t] = offsets[t - 1] + rng.normal2() * sigma;
    }
    return offsets;
}

std::vector<Vec2> brownian_bridge(int len, Vec2 endpoint, double sigma, std::uint64_t seed) {
    if (len < 2) throw InvalidLength("brownian_bridge needs len >= 2");
    if (sigma < 0.0) throw InvariantViolation("brownian_bridge sigma must be >= 0");
    std::vector<Vec2> walk(len, Vec2{0.0, 0.0});
    Rng rng(seed, rng_stream::kBridge);
    for (int t = 1; t < len; ++t) {
        walk[t] = walk[t - 1] + rng.normal2() * sigma;
    }
    std::vector<Vec2> offsets(len);
    const Vec2 final_walk = walk[len - 1];
    for (int t = 0; t < len; ++t) {
        const double f = static_cast<double>(t) / static_cast<double>(len - 1);
        offsets[t] = walk[t] - final_walk * f + endpoint * f;
    }
    // f = 1 makes walk[T-1] - walk[T-1] exactly zero, so the endpoint is
    // pinned bit-exactly; restate it to keep that independent of reordering.
    offsets[len - 1] = endpoint;
    offsets[0] = Vec2{0.0, 0.0};
    return offsets;
}

std::vector<Vec2> noise_offsets(int len, NoisePreset preset, double base_sigma,
                                double base_drift, std::uint64_t seed) {
    if (preset.gauss_scale < 0.0 || preset.drift_scale < 0.0) {
        throw InvariantViolation("noise preset scales must be >= 0");
    }
    std::vector<Vec2> offsets(len, Vec2{0.0, 0.0});
    if (preset.gauss_scale > 0.0) {
        const auto walk = random_walk(len, preset.gauss_scale * base_sigma, seed);
        for (int t = 0; t < len; ++t) offsets[t] = offsets[t] + walk[t];
    }
    if (preset.drift_scale > 0.0 && len >= 2) {
        Rng rng(seed, rng_stream::kDriftEndpoint);
        const Vec2 endpoint = rng.normal2() * (preset.drift_scale * base_drift);
        const auto bridge = brownian_bridge(len, endpoint, preset.drift_scale * base_sigma, seed);
        for (int t = 0; t < len; ++t) offsets[t] = offsets[t] + bridge[t];
    }
    return offsets;
}

KeypointFlow perturb_flow(const KeypointFlow& flow, NoisePreset preset, double base_sigma,
                          double base_drift, std::uint64_t seed) {
    flow.validate();
    if (preset.gauss_scale == 0.0 && preset.drift_scale == 0.0) return flow;
    const auto offsets = noise_offsets(flow.frames, preset, base_sigma, base_drift, seed);
    KeypointFlow out = flow;
    for (int t = 0; t < out.frames; ++t) {
        for (int i = 0; i < out.keypoints; ++i) {
            out.at(t, i) = out.at(t, i) + offsets[t];
        }
    }
    return out;
}

}  // namespace dflow
