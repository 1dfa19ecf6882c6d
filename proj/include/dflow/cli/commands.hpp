#pragma once

#include <string>
#include <vector>

#include "dflow/cli/config.hpp"
#include "dflow/flow_io.hpp"
#include "dflow/rl/trainer.hpp"

namespace dflow::cli {

// Paths of everything a training run wrote, plus the in-memory results in
// seed order (agents included, for chained evaluation).
struct TrainArtifacts {
    std::vector<std::string> curve_files;
    std::vector<std::string> checkpoint_files;
    std::string summary_file;
    std::vector<rl::TrainResult> results;
};

// Trains cfg.train per seed (bounded worker pool, one environment per
// worker), then writes per-seed curve CSVs, per-seed checkpoints, and a
// cross-seed summary table into cfg.out_dir.
TrainArtifacts cmd_train(const ExperimentConfig& cfg);

// Greedy evaluation of a checkpoint on the configured task; writes one row
// per episode and returns the success rate. Throws ConfigError when
// episodes < 1 or the checkpoint's input width disagrees with the config.
double cmd_evaluate(const ExperimentConfig& cfg, const std::string& checkpoint_path,
                    int episodes, std::uint64_t seed, const std::string& out_csv);

struct ScoreResult {
    std::vector<double> per_step;  // reward at each frame of flow A
    std::vector<int> aligned;      // index into flow B each step was scored against
    double mean = 0.0;
    double total = 0.0;  // cumulative sum over steps
};

// Flow-tracking score of flow A against reference flow B at aligned frame
// indices (proportional index mapping; the rotation scale is calibrated from
// the reference). Pure function behind cmd_score.
ScoreResult score_flows(const KeypointFlow& a, const KeypointFlow& b, RewardScale base);

// Loads both flow files, scores A against B, writes a per-step CSV
// (step, ref_step, reward, cumulative). The provenance hash covers both
// input files and the scale.
ScoreResult cmd_score(const std::string& flow_a_path, const std::string& flow_b_path,
                      RewardScale base, const std::string& out_csv);

struct AblateArtifacts {
    std::vector<std::string> curve_files;  // per entry x seed (training axes only)
    std::string table_file;
    std::vector<std::string> labels;  // row/family labels in emitted order
};

// Runs the configured ablation axis:
//   variant   — retrains each reward variant under identical seeds,
//   keypoints — retrains each keypoint count under identical seeds,
//   noise     — scores clean expert flows against their noised copies for
//               every preset (episodes-per-preset Monte Carlo, no training).
AblateArtifacts cmd_ablate(const ExperimentConfig& cfg);

// Records one scripted-expert episode and writes its keypoint flow.
// Returns the written path. Throws ScriptFailure if the expert cannot finish.
std::string cmd_record_expert(sim::TaskId task, std::uint64_t seed, int keypoints,
                              const std::string& out_path);

// Loads a flow file, applies a named noise preset, writes the result.
std::string cmd_perturb(const std::string& in_path, const std::string& preset_name,
                        std::uint64_t seed, const std::string& out_path);

// Shortest-round-trip decimal rendering used for every CSV number: parsing
// the text back yields the identical double, so downstream recomputation is
// exact and reruns are byte-identical.
std::string format_number(double v);

}  // namespace dflow::cli
