#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dflow/noise.hpp"
#include "dflow/reward.hpp"
#include "dflow/rl/trainer.hpp"
#include "dflow/sim/world.hpp"

namespace dflow::cli {

// What an ablation sweep varies. "variant" and "keypoints" retrain per entry;
// "noise" is a Monte-Carlo replay study (no training).
struct AblateSpec {
    std::string axis = "variant";      // variant | keypoints | noise
    std::vector<std::string> variants; // axis = variant: >= 2 reward variants
    std::vector<int> keypoint_counts;  // axis = keypoints: >= 2 subsample sizes
    int episodes = 100;                // axis = noise: episodes per preset
};

// One experiment, parsed from a single human-editable JSON file. Every field
// except `task` has a default; CLI flags may override `seeds` and `out`.
struct ExperimentConfig {
    sim::TaskId task = sim::TaskId::PickPlace;
    RewardVariant variant = RewardVariant::DeltaFlow;
    std::string noise_name = "none";  // preset name, or "custom" for explicit scales
    NoisePreset noise{};
    int keypoints = kDefaultKeypointCount;
    int lookahead = 8;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::string out_dir = "out";
    rl::TrainConfig train{};  // env subconfig is derived from the fields above
    AblateSpec ablate{};

    sim::EnvConfig env_config() const;
    rl::TrainConfig train_config() const;  // env filled in, validated
    void validate() const;                 // throws ConfigError naming the field

    // Canonical JSON of the effective config (defaults and overrides applied,
    // keys sorted). Reruns of an identical config hash identically.
    std::string canonical_json() const;
    std::string hash() const;  // 16-hex FNV-1a of canonical_json()
};

// Strict parse: unknown fields and wrong types are ConfigErrors that name the
// offending field; JSON syntax errors are ConfigErrors with the parser's
// line/offset diagnostics.
ExperimentConfig config_from_json(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig config_from_file(const std::string& path);

struct ConfigOverrides {
    std::optional<std::uint64_t> seed;  // replaces the seed list with one seed
    std::optional<std::string> out_dir;
};
void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& ov);

// FNV-1a 64-bit, rendered as 16 lowercase hex digits.
std::uint64_t fnv1a(const std::string& text);
std::string hash_hex(const std::string& text);

}  // namespace dflow::cli
