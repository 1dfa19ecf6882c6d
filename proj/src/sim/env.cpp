#include "dflow/sim/env.hpp"

#include <algorithm>
#include <cmath>

namespace dflow::sim {

Environment::Environment(EnvConfig config) : config_(config), machine_(config.scale) {
    if (config_.keypoints < kMinVisible) {
        throw ConfigError("keypoints must be >= " + std::to_string(kMinVisible));
    }
    if (config_.lookahead < 0 || config_.lookahead > kMaxEpisodeSteps) {
        throw ConfigError("lookahead out of range");
    }
    config_.scale.validate();
}

std::vector<float> Environment::reset(std::uint64_t seed) {
    seed_ = seed;
    world_ = make_world(config_.task, seed, kDefaultKeypointCount);
    sampled_ = subsample_indices(kDefaultKeypointCount, config_.keypoints, seed);

    trace_ = record_expert(config_.task, seed, kDefaultKeypointCount);
    ref_flow_ = perturb_flow(select_keypoints(trace_.flow.flow, sampled_), config_.noise, seed);
    ref_delta_ = delta_flow(ref_flow_);
    scale_ = calibrate_rotation_scale(config_.scale, ref_flow_);
    machine_ = RewardMachine(scale_);

    robot_flow_ = KeypointFlow::zeros(episode_frames(), static_cast<int>(sampled_.size()));
    frames_recorded_ = 0;
    capture_frame();
    last_delta_ = DeltaStep{};  // zero by definition at the first frame
    try {
        last_centroid_ = centroid(robot_flow_.frame_positions(0), robot_flow_.frame_visibility(0));
    } catch (const TooFewVisible&) {
        last_centroid_ = Vec2{};
    }
    initial_centroid_ = last_centroid_;

    initialized_ = true;
    done_ = false;
    return make_observation();
}

void Environment::capture_frame() {
    oracle_track(world_, scratch_pos_, scratch_vis_);
    const int t = frames_recorded_;
    for (std::size_t k = 0; k < sampled_.size(); ++k) {
        const auto src = static_cast<std::size_t>(sampled_[k]);
        robot_flow_.at(t, static_cast<int>(k)) = scratch_pos_[src];
        robot_flow_.set_visible(t, static_cast<int>(k), scratch_vis_[src] != 0);
    }
    ++frames_recorded_;
}

bool Environment::refresh_delta() {
    const int cur = frames_recorded_ - 1;
    const int n = robot_flow_.keypoints;
    KeypointFlow pair = KeypointFlow::zeros(2, n);
    for (int i = 0; i < n; ++i) {
        pair.at(0, i) = robot_flow_.at(0, i);
        pair.set_visible(0, i, robot_flow_.visible(0, i));
        pair.at(1, i) = robot_flow_.at(cur, i);
        pair.set_visible(1, i, robot_flow_.visible(cur, i));
    }
    try {
        const DeltaFlow d = delta_flow(pair);
        last_delta_ = d.step(1);
        last_centroid_ = d.centroids[1];
        return true;
    } catch (const TooFewVisible&) {
        return false;  // hold the previous estimate; no dense evidence this step
    }
}

double Environment::dense_term(bool measured, int flow_index) const {
    switch (config_.variant) {
        case RewardVariant::DeltaFlow:
            if (!measured) return 0.0;
            return flow_match_reward(last_delta_, ref_delta_.step(flow_index), scale_);
        case RewardVariant::PoseTraj:
            return pose_step_reward(world_.state.object,
                                    trace_.object_poses[static_cast<std::size_t>(flow_index)],
                                    scale_);
        case RewardVariant::KeypointEndpoint: {
            const int cur = frames_recorded_ - 1;
            const int last = ref_flow_.frames - 1;
            const int n = robot_flow_.keypoints;
            std::vector<Vec2> now(static_cast<std::size_t>(n));
            std::vector<Vec2> goal(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                now[static_cast<std::size_t>(i)] = robot_flow_.at(cur, i);
                goal[static_cast<std::size_t>(i)] = ref_flow_.at(last, i);
            }
            return keypoint_endpoint_reward(now, goal, scale_);
        }
        case RewardVariant::SparseOnly:
            return 0.0;
    }
    return 0.0;
}

StepResult Environment::step(const Action& action) {
    if (!initialized_) throw InvariantViolation("Environment::step before reset");
    if (done_) throw EpisodeFinished("episode finished; call reset()");

    const WorldEvents ev = world_step(world_, action);
    capture_frame();
    const int cur = frames_recorded_ - 1;

    StepResult res;
    res.flow_index = align_flow_index(cur, episode_frames(), ref_flow_.frames);
    res.measured = refresh_delta();
    res.r_delta = dense_term(res.measured, res.flow_index);
    res.subgoal = ev.subgoal_now;
    res.success = ev.success_now;
    res.reward = machine_.step(grip_distance(world_), res.r_delta,
                               StepEvents{ev.subgoal_now, ev.success_now});
    res.phase = machine_.phase();

    // Episodes always run to the step cap: completion latches the absorbing
    // Completed phase (reward 1.0 per remaining step), so finishing — and
    // finishing early — strictly dominates hovering near the goal.
    done_ = world_.state.step >= kMaxEpisodeSteps;
    res.done = done_;
    res.observation = make_observation();
    return res;
}

KeypointFlow Environment::tracked_flow() const {
    KeypointFlow out = KeypointFlow::zeros(frames_recorded_, robot_flow_.keypoints);
    for (int t = 0; t < frames_recorded_; ++t) {
        for (int i = 0; i < robot_flow_.keypoints; ++i) {
            out.at(t, i) = robot_flow_.at(t, i);
            out.set_visible(t, i, robot_flow_.visible(t, i));
        }
    }
    return out;
}

std::vector<float> Environment::make_observation() const {
    const double w = kCanvas;
    const WorldState& st = world_.state;
    const Vec2 handle = handle_world(world_);
    const int cur = frames_recorded_ - 1;
    const int aligned = align_flow_index(cur, episode_frames(), ref_flow_.frames);

    std::vector<float> obs;
    obs.reserve(static_cast<std::size_t>(observation_size()));
    const auto push = [&obs](double v) { obs.push_back(static_cast<float>(v)); };

    push(st.gripper.p.x / w);
    push(st.gripper.p.y / w);
    push(std::cos(st.gripper.theta));
    push(std::sin(st.gripper.theta));
    push(st.grip_closed ? 1.0 : 0.0);
    push(st.attached ? 1.0 : 0.0);
    push(handle.x / w);
    push(handle.y / w);
    push(grip_distance(world_) / w);
    push(static_cast<double>(cur) / kMaxEpisodeSteps);
    push(last_centroid_.x / w);
    push(last_centroid_.y / w);
    push(last_delta_.translation.x / w);
    push(last_delta_.translation.y / w);
    push(last_delta_.rotation / kRotationNorm);
    push(st.subgoal_reached ? 1.0 : 0.0);
    push(initial_centroid_.x / w);  // anchor frame centroid (constant per episode)
    push(initial_centroid_.y / w);
    for (int j = 1; j <= config_.lookahead; ++j) {
        const int idx = std::min(aligned + j, ref_flow_.frames - 1);
        const auto u = static_cast<std::size_t>(idx);
        push(ref_delta_.centroids[u].x / w);
        push(ref_delta_.centroids[u].y / w);
        push(ref_delta_.translations[u].x / w);
        push(ref_delta_.translations[u].y / w);
        push(ref_delta_.rotations[u] / kRotationNorm);
    }
    return obs;
}

ReplaySummary replay_expert(Environment& env, std::uint64_t seed) {
    ReplaySummary s;
    env.reset(seed);
    double tracking_sum = 0.0;
    int tracking_n = 0;
    while (!env.done()) {
        const RewardPhase before = env.phase();
        const StepResult r = env.step(expert_action(env.world()));
        ++s.steps;
        s.total_reward += r.reward;
        s.rewards.push_back(r.reward);
        s.r_deltas.push_back(r.r_delta);
        s.phases.push_back(r.phase);
        if (before == RewardPhase::SubgoalJustReached || before == RewardPhase::Tracking) {
            tracking_sum += r.r_delta;
            ++tracking_n;
        }
    }
    s.succeeded = env.world().state.succeeded;
    s.mean_tracking_r_delta = tracking_n > 0 ? tracking_sum / tracking_n : 0.0;
    return s;
}

}  // namespace dflow::sim
