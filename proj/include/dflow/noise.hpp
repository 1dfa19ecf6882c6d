#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dflow/flow.hpp"

namespace dflow {

// Composite trajectory-noise magnitudes as multipliers of the base scales.
struct NoisePreset {
    double gauss_scale = 0.0;  // multiplies the random-walk stddev
    double drift_scale = 0.0;  // multiplies the endpoint-drift stddev
};

// Base magnitudes: at drift x2 the endpoint deviation stddev is 20 px per
// axis, the stress regime's order of magnitude.
constexpr double kBaseSigma = 0.5;   // px/step
constexpr double kBaseDrift = 10.0;  // px

// Named presets addressable from config and CLI: gauss1-drift0, gauss4-drift0,
// gauss2-drift1, gauss2-drift2. Throws ConfigError on unknown names.
NoisePreset preset_from_name(const std::string& name);
const std::vector<std::string>& preset_names();

// Gaussian random walk: offsets[0] = (0,0); offsets[t] = offsets[t-1] + e_t
// with e_t ~ iid Normal(0, sigma^2) per axis. Deterministic per seed.
std::vector<Vec2> random_walk(int len, double sigma, std::uint64_t seed);

// Brownian bridge pinned at (0,0) and `endpoint`:
//   bridge[t] = walk[t] - (t/(T-1)) * walk[T-1] + (t/(T-1)) * endpoint.
// The final offset equals `endpoint` exactly for every seed.
std::vector<Vec2> brownian_bridge(int len, Vec2 endpoint, double sigma, std::uint64_t seed);

// Shared per-frame offset sequence of the composite model: a random walk at
// gauss_scale*base_sigma plus a Brownian bridge whose endpoint is drawn from
// Normal(0, (drift_scale*base_drift)^2) per axis and whose interior stddev is
// drift_scale*base_sigma (the whole drift component vanishes at drift x0).
std::vector<Vec2> noise_offsets(int len, NoisePreset preset, double base_sigma,
                                double base_drift, std::uint64_t seed);

// Adds one shared offset sequence to every keypoint trajectory (object-level
// noise: rigid structure within each frame is preserved). All-zero scales are
// the exact identity. Visibility is untouched.
KeypointFlow perturb_flow(const KeypointFlow& flow, NoisePreset preset, double base_sigma,
                          double base_drift, std::uint64_t seed);

inline KeypointFlow perturb_flow(const KeypointFlow& flow, NoisePreset preset,
                                 std::uint64_t seed) {
    return perturb_flow(flow, preset, kBaseSigma, kBaseDrift, seed);
}

}  // namespace dflow
