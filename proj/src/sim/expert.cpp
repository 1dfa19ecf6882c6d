#include "dflow/sim/expert.hpp"

#include <cmath>

namespace dflow::sim {

namespace {

constexpr double kEngageDistance = 6.0;         // close the grip at this range
constexpr double kStepReach = kSubstepsPerAction * kSubstepXY;  // px per step at full speed
constexpr double kStepTurn = kSubstepsPerAction * kSubstepTheta;
// Manipulation proceeds at a third of full speed so a tracker that falls
// behind the recorded schedule can always close the gap (its top speed is
// kStepReach, i.e. three steps of slack per step of lag).
constexpr double kCarryPx = kStepReach / 3.0;       // px per step while moving a body
constexpr double kCarryTheta = kStepTurn / 3.0;     // rad per step while turning a body
constexpr double kPourGoalHeading = 0.5 * (kPourHeadingLo + kPourHeadingHi);
constexpr double kPivotGoalTheta = 1.1;               // just past the success angle

double clamp_abs(double v, double bound) { return std::min(bound, std::max(-bound, v)); }

// Per-axis proportional move capped at max_px per step: lands exactly when
// each component is within one step's cap, saturates otherwise.
void move_towards(Action& a, const Vec2& delta, double max_px) {
    a.dx = clamp_abs(delta.x, max_px) / kStepReach;
    a.dy = clamp_abs(delta.y, max_px) / kStepReach;
}

Action approach(const World& w) {
    Action a;
    const Vec2 delta = handle_world(w) - w.state.gripper.p;
    move_towards(a, delta, kStepReach);
    a.grip = (w.spec.uses_grasp && delta.norm() <= kEngageDistance) ? 1.0 : -1.0;
    return a;
}

Action act_pick_place(const World& w) {
    if (!w.state.attached) return approach(w);
    Action a;
    a.grip = 1.0;
    move_towards(a, w.spec.target - w.state.object.p, kCarryPx);
    return a;
}

Action act_pour(const World& w) {
    if (!w.state.attached) return approach(w);
    Action a;
    a.grip = 1.0;
    const Vec2 delta = w.spec.pour_point() - w.state.object.p;
    move_towards(a, delta, kCarryPx);
    if (delta.norm() <= 8.0) {
        // Close enough to the lip: tilt toward the middle of the heading band
        // while the position hold keeps the body over the container.
        const double err = wrap_angle(kPourGoalHeading - w.state.object.theta);
        a.dtheta = clamp_abs(err, kCarryTheta) / kStepTurn;
        if (w.state.succeeded && std::abs(err) < 5e-3) {
            Action hold;
            hold.grip = 1.0;  // keep the grasp; stay put
            return hold;
        }
    }
    return a;
}

Action act_open(const World& w) {
    if (!w.state.attached) return approach(w);
    Action a;
    a.grip = 1.0;
    const double remaining = 60.0 - w.state.drawer_travel;  // pull past the success mark
    a.dx = std::max(0.0, clamp_abs(remaining, kCarryPx)) / kStepReach;
    return a;
}

Action act_pivot(const World& w) {
    if (!w.state.attached) return approach(w);
    Action a;
    const double theta = w.state.pivot_theta;
    const double err = kPivotGoalTheta - theta;
    if (err <= 1e-4) return a;  // hold
    // Push along the sweep tangent; the lever arm converts u px of contact
    // motion into u / arm-length radians.
    const double arm = (handle_world(w) - w.spec.anchor).norm();
    const double u = std::min(kCarryPx, err * arm) / kStepReach;
    a.dx = u * std::sin(theta);
    a.dy = u * std::cos(theta);
    return a;
}

}  // namespace

Action expert_action(const World& w) {
    switch (w.spec.id) {
        case TaskId::PickPlace: return act_pick_place(w);
        case TaskId::Pour: return act_pour(w);
        case TaskId::Open: return act_open(w);
        case TaskId::Pivot: return act_pivot(w);
    }
    return Action{};
}

ExpertTrace record_expert(TaskId task, std::uint64_t seed, int keypoint_count) {
    World w = make_world(task, seed, keypoint_count);
    const int frames = kMaxEpisodeSteps + 1;
    const int n = static_cast<int>(w.spec.body_keypoints.size());

    ExpertTrace trace;
    trace.flow.task = task_name(task);
    trace.flow.flow = KeypointFlow::zeros(frames, n);
    trace.object_poses.reserve(frames);

    std::vector<Vec2> positions;
    std::vector<std::uint8_t> visibility;
    const auto capture = [&](int frame) {
        oracle_track(w, positions, visibility);
        for (int i = 0; i < n; ++i) {
            trace.flow.flow.at(frame, i) = positions[static_cast<std::size_t>(i)];
            trace.flow.flow.set_visible(frame, i, visibility[static_cast<std::size_t>(i)] != 0);
        }
        trace.object_poses.push_back(w.state.object);
    };

    capture(0);
    for (int step = 0; step < kMaxEpisodeSteps; ++step) {
        const WorldEvents ev = world_step(w, expert_action(w));
        if (ev.success_now) trace.success_step = step;
        capture(step + 1);
    }
    trace.succeeded = w.state.succeeded;
    if (!trace.succeeded) {
        throw ScriptFailure("scripted rollout failed: task=" + std::string(task_name(task)) +
                            " seed=" + std::to_string(seed));
    }
    trace.flow.flow.validate();
    return trace;
}

}  // namespace dflow::sim
