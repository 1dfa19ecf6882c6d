#pragma once

#include <cstdint>
#include <vector>

#include "dflow/noise.hpp"
#include "dflow/pipeline.hpp"
#include "dflow/reward.hpp"
#include "dflow/sim/expert.hpp"
#include "dflow/sim/world.hpp"

namespace dflow::sim {

// Rotation-statistic normalizer for observation features (pixels^2).
constexpr double kRotationNorm = 2000.0;

struct EnvConfig {
    TaskId task = TaskId::PickPlace;
    RewardVariant variant = RewardVariant::DeltaFlow;
    NoisePreset noise{};                    // applied to the reference flow only
    int keypoints = kDefaultKeypointCount;  // tracked subset size (>= 4)
    int lookahead = 8;                      // reference steps visible in the observation
    RewardScale scale{};                    // rotation scale is recalibrated per episode
};

struct StepResult {
    std::vector<float> observation;
    double reward = 0.0;
    double r_delta = 0.0;      // dense tracking term fed to the reward machine
    RewardPhase phase = RewardPhase::Reaching;  // machine phase after the step
    bool subgoal = false;      // grasp/contact engaged this step
    bool success = false;      // goal reached this step
    bool done = false;         // episode over (fixed step cap; completion absorbs at 1.0)
    bool measured = true;      // false when occlusion left too few joint-visible points
    int flow_index = 0;        // reference frame this step was scored against
};

// One manipulation episode seen through tracked keypoints. reset() rolls the
// scripted controller on the same seed to record the reference flow, applies
// the configured trajectory noise to that reference, calibrates the rotation
// scale from it, and re-creates the world for the learner. Rewards then come
// from the hybrid machine with the configured dense variant.
class Environment {
public:
    explicit Environment(EnvConfig config);  // throws ConfigError

    static constexpr int kActionSize = 4;
    static constexpr int kObsBase = 18;
    int observation_size() const { return kObsBase + 5 * config_.lookahead; }
    int episode_frames() const { return kMaxEpisodeSteps + 1; }

    std::vector<float> reset(std::uint64_t seed);
    StepResult step(const Action& action);  // throws EpisodeFinished once done

    const EnvConfig& config() const { return config_; }
    const World& world() const { return world_; }
    const ExpertTrace& reference_trace() const { return trace_; }  // clean recording
    const KeypointFlow& reference_flow() const { return ref_flow_; }  // sampled + noise
    const DeltaFlow& reference_delta() const { return ref_delta_; }
    const RewardScale& scale() const { return scale_; }  // calibrated
    const std::vector<int>& sampled_indices() const { return sampled_; }
    RewardPhase phase() const { return machine_.phase(); }
    bool done() const { return done_; }
    std::uint64_t seed() const { return seed_; }

    // Frames tracked so far in this episode (trimmed copy).
    KeypointFlow tracked_flow() const;

private:
    void capture_frame();
    bool refresh_delta();  // false when too few joint-visible points
    double dense_term(bool measured, int flow_index) const;
    std::vector<float> make_observation() const;

    EnvConfig config_;
    std::uint64_t seed_ = 0;
    World world_;
    ExpertTrace trace_;
    std::vector<int> sampled_;
    KeypointFlow ref_flow_;
    DeltaFlow ref_delta_;
    RewardScale scale_;
    RewardMachine machine_;
    KeypointFlow robot_flow_;
    int frames_recorded_ = 0;
    DeltaStep last_delta_{};
    Vec2 last_centroid_{};
    Vec2 initial_centroid_{};  // frame-0 tracked centroid (constant per episode)
    bool initialized_ = false;
    bool done_ = false;
    std::vector<Vec2> scratch_pos_;
    std::vector<std::uint8_t> scratch_vis_;
};

// Outcome of driving the scripted controller through an Environment episode.
struct ReplaySummary {
    int steps = 0;
    bool succeeded = false;
    double total_reward = 0.0;
    double mean_tracking_r_delta = 0.0;  // over steps scored by the tracking rule
    std::vector<double> rewards;
    std::vector<double> r_deltas;
    std::vector<RewardPhase> phases;
};

ReplaySummary replay_expert(Environment& env, std::uint64_t seed);

}  // namespace dflow::sim
