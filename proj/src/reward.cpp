#include "dflow/reward.hpp"

#include <algorithm>
#include <cmath>

namespace dflow {

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

void RewardScale::validate() const {
    if (!(c_tr > 0.0) || !(c_rot > 0.0) || !(c_heading > 0.0)) {
        throw InvariantViolation("reward clip scales must be positive");
    }
    if (!(alpha >= 0.0) || !(beta >= 0.0) || alpha + beta > 1.0 + 1e-12) {
        throw InvariantViolation("need alpha, beta >= 0 and alpha + beta <= 1");
    }
    if (!(tau > 0.0)) throw InvariantViolation("tau must be positive");
    if (!(canvas_width > 0.0)) throw InvariantViolation("canvas width must be positive");
}

const char* phase_name(RewardPhase phase) {
    switch (phase) {
        case RewardPhase::Reaching: return "reaching";
        case RewardPhase::SubgoalJustReached: return "subgoal-just-reached";
        case RewardPhase::Tracking: return "tracking";
        case RewardPhase::Completed: return "completed";
    }
    return "?";
}

double flow_match_reward(const DeltaStep& robot, const DeltaStep& generated,
                         const RewardScale& scale) {
    scale.validate();
    if (!robot.translation.finite() || !std::isfinite(robot.rotation) ||
        !generated.translation.finite() || !std::isfinite(generated.rotation)) {
        throw InvariantViolation("flow_match_reward requires finite inputs");
    }
    const double tr_mismatch = (robot.translation - generated.translation).squared_norm();
    const double rot_mismatch = (robot.rotation - generated.rotation) *
                                (robot.rotation - generated.rotation);
    return 1.0 - clip01(tr_mismatch / scale.c_tr + rot_mismatch / scale.c_rot);
}

double reaching_reward(double d_grip, double tau) {
    if (d_grip < 0.0) throw InvariantViolation("d_grip must be >= 0");
    return 1.0 - std::tanh(tau * d_grip);
}

HybridResult hybrid_reward(RewardPhase phase, double d_grip, double r_delta, StepEvents events,
                           const RewardScale& scale) {
    scale.validate();
    if (!(r_delta >= 0.0 && r_delta <= 1.0)) {
        throw InvariantViolation("r_delta outside [0,1]: " + std::to_string(r_delta));
    }

    if (phase == RewardPhase::Completed) {
        return {1.0, RewardPhase::Completed};  // absorbing
    }
    if (events.subgoal_done && phase != RewardPhase::Reaching) {
        throw IllegalTransition(std::string("subgoal event in phase ") + phase_name(phase));
    }
    if (events.task_done) {
        if (phase == RewardPhase::Reaching && !events.subgoal_done) {
            throw IllegalTransition("task completion while still reaching");
        }
        return {1.0, RewardPhase::Completed};
    }
    if (phase == RewardPhase::Reaching) {
        if (events.subgoal_done) {
            return {scale.alpha, RewardPhase::SubgoalJustReached};
        }
        return {scale.alpha * reaching_reward(d_grip / scale.canvas_width, scale.tau),
                RewardPhase::Reaching};
    }
    // SubgoalJustReached or Tracking: dense flow tracking.
    return {std::min(scale.alpha + scale.beta * r_delta, 1.0), RewardPhase::Tracking};
}

double pose_step_reward(const Pose2& robot, const Pose2& expert, const RewardScale& scale) {
    const double pos_mismatch = (robot.p - expert.p).squared_norm();
    const double heading = wrap_angle(robot.theta - expert.theta);
    return 1.0 - clip01(pos_mismatch / scale.c_tr + heading * heading / scale.c_heading);
}

double pose_trajectory_reward(const std::vector<Pose2>& robot, const std::vector<Pose2>& expert,
                              const RewardScale& scale) {
    scale.validate();
    if (robot.size() != expert.size() || robot.empty()) {
        throw CountMismatch("pose trajectories must be non-empty and equal length (" +
                            std::to_string(robot.size()) + " vs " +
                            std::to_string(expert.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < robot.size(); ++t) {
        sum += pose_step_reward(robot[t], expert[t], scale);
    }
    return sum / static_cast<double>(robot.size());
}

double keypoint_endpoint_reward(const std::vector<Vec2>& robot_final,
                                const std::vector<Vec2>& expert_final,
                                const RewardScale& scale) {
    scale.validate();
    if (robot_final.size() != expert_final.size() || robot_final.empty()) {
        throw CountMismatch("endpoint keypoint sets must be non-empty and equal size (" +
                            std::to_string(robot_final.size()) + " vs " +
                            std::to_string(expert_final.size()) + ")");
    }
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < robot_final.size(); ++i) {
        mean_sq += (robot_final[i] - expert_final[i]).squared_norm();
    }
    mean_sq /= static_cast<double>(robot_final.size());
    return 1.0 - clip01(mean_sq / scale.c_tr);
}

RewardScale calibrate_rotation_scale(RewardScale base, const KeypointFlow& reference) {
    base.validate();
    const DeltaFlow d = delta_flow(reference);

    std::vector<double> sq;
    sq.reserve(d.rotations.size());
    for (std::size_t t = 1; t < d.rotations.size(); ++t) {
        sq.push_back(d.rotations[t] * d.rotations[t]);
    }
    double p90 = 0.0;
    if (!sq.empty()) {
        std::sort(sq.begin(), sq.end());
        const std::size_t idx = static_cast<std::size_t>(0.9 * static_cast<double>(sq.size() - 1));
        p90 = sq[idx];
    }

    // Keypoint spread about the frame-0 centroid sets the natural magnitude
    // of the rotation statistic (a full rotation swings it by ~spread).
    const Vec2 c0 = centroid(reference.frame_positions(0), reference.frame_visibility(0));
    double msr = 0.0;
    int n = 0;
    for (int i = 0; i < reference.keypoints; ++i) {
        if (reference.visible(0, i)) {
            msr += (reference.at(0, i) - c0).squared_norm();
            ++n;
        }
    }
    msr /= static_cast<double>(n);
    const double floor = 0.2 * msr * 0.2 * msr;

    base.c_rot = std::max({p90, floor, 1.0});
    return base;
}

RewardVariant reward_variant_from_name(const std::string& name) {
    if (name == "delta-flow") return RewardVariant::DeltaFlow;
    if (name == "pose-traj") return RewardVariant::PoseTraj;
    if (name == "keypoint-endpoint") return RewardVariant::KeypointEndpoint;
    if (name == "sparse-only") return RewardVariant::SparseOnly;
    throw ConfigError("unknown reward variant '" + name +
                      "' (known: delta-flow, pose-traj, keypoint-endpoint, sparse-only)");
}

const char* reward_variant_name(RewardVariant variant) {
    switch (variant) {
        case RewardVariant::DeltaFlow: return "delta-flow";
        case RewardVariant::PoseTraj: return "pose-traj";
        case RewardVariant::KeypointEndpoint: return "keypoint-endpoint";
        case RewardVariant::SparseOnly: return "sparse-only";
    }
    return "?";
}

}  // namespace dflow
