#pragma once

#include <string>
#include <vector>

#include "dflow/error.hpp"
#include "dflow/flow.hpp"
#include "dflow/geometry.hpp"

namespace dflow {

// Scales of the clipped-quadratic rewards and the hybrid-machine weights.
// The translation and rotation mismatches carry different units (px^2 vs
// px^4), so each gets its own clip scale.
struct RewardScale {
    double c_tr = 48.0 * 48.0;             // px^2: |translation mismatch|^2 that zeroes the reward
    double c_rot = 48.0 * 48.0 * 48.0 * 48.0;  // px^4: rotation-stat mismatch scale (calibrated)
    double alpha = 0.25;                   // reaching/subgoal weight
    double beta = 0.75;                    // dense tracking weight
    double tau = 10.0;                     // reaching temperature per unit normalized distance
    double canvas_width = 480.0;           // normalizes gripper distances
    double c_heading = (3.14159265358979323846 / 8.0) * (3.14159265358979323846 / 8.0);
    // ^ rad^2: heading mismatch scale for the pose-trajectory baseline

    void validate() const;  // throws InvariantViolation
};

// Four-phase hybrid reward machine state; transitions only move forward.
enum class RewardPhase { Reaching, SubgoalJustReached, Tracking, Completed };

const char* phase_name(RewardPhase phase);

struct StepEvents {
    bool subgoal_done = false;  // grasp/contact achieved this step
    bool task_done = false;     // goal condition achieved this step
};

struct HybridResult {
    double reward = 0.0;
    RewardPhase next_phase = RewardPhase::Reaching;
};

// Normalized flow-matching reward:
//   1 - clip(|tr_R - tr_G|^2 / c_tr + (rot_R - rot_G)^2 / c_rot, 0, 1).
double flow_match_reward(const DeltaStep& robot, const DeltaStep& generated,
                         const RewardScale& scale);

// 1 - tanh(tau * d_grip); d_grip in normalized canvas units (pixels / width).
double reaching_reward(double d_grip, double tau = 10.0);

// One step of the hybrid machine. `phase` is the state before the step,
// d_grip is in pixels, r_delta must already lie in [0,1]. Emits:
//   Reaching             -> alpha * (1 - tanh(tau * d_grip / canvas_width))
//   subgoal fires        -> alpha, advances to SubgoalJustReached
//   SubgoalJustReached / Tracking -> min(alpha + beta * r_delta, 1), advances to Tracking
//   task_done fires      -> 1.0, advances to Completed (absorbing)
// Throws IllegalTransition when events contradict the forward-only ordering
// (task completion while still reaching without a simultaneous subgoal, or a
// second subgoal event).
HybridResult hybrid_reward(RewardPhase phase, double d_grip, double r_delta, StepEvents events,
                           const RewardScale& scale);

// Episode-owned convenience wrapper around hybrid_reward.
class RewardMachine {
public:
    explicit RewardMachine(RewardScale scale) : scale_(scale) { scale_.validate(); }

    double step(double d_grip, double r_delta, StepEvents events) {
        const HybridResult r = hybrid_reward(phase_, d_grip, r_delta, events, scale_);
        phase_ = r.next_phase;
        return r.reward;
    }

    RewardPhase phase() const { return phase_; }
    const RewardScale& scale() const { return scale_; }

private:
    RewardScale scale_;
    RewardPhase phase_ = RewardPhase::Reaching;
};

// Clipped-quadratic reward on one (position, heading) pose mismatch.
double pose_step_reward(const Pose2& robot, const Pose2& expert, const RewardScale& scale);

// Mean pose_step_reward over two equal-length aligned trajectories.
// Throws CountMismatch when lengths differ or are zero.
double pose_trajectory_reward(const std::vector<Pose2>& robot, const std::vector<Pose2>& expert,
                              const RewardScale& scale);

// Clipped-quadratic reward on the mean final keypoint position error; ignores
// everything between start and end. Throws CountMismatch.
double keypoint_endpoint_reward(const std::vector<Vec2>& robot_final,
                                const std::vector<Vec2>& expert_final, const RewardScale& scale);

// Sets c_rot from a reference flow: the 90th percentile of the squared
// rotation statistic along the flow, floored at (0.2 * mean squared keypoint
// radius)^2 and at 1.0 so rotation-free tasks keep a meaningful scale.
RewardScale calibrate_rotation_scale(RewardScale base, const KeypointFlow& reference);

// Reward provider selector shared by config and CLI.
enum class RewardVariant { DeltaFlow, PoseTraj, KeypointEndpoint, SparseOnly };

RewardVariant reward_variant_from_name(const std::string& name);  // throws ConfigError
const char* reward_variant_name(RewardVariant variant);

}  // namespace dflow
