#pragma once

#include <cstdint>
#include <vector>

#include "dflow/flow_io.hpp"
#include "dflow/sim/world.hpp"

namespace dflow::sim {

// Scripted controller: a pure function of the current world state. Each task
// has an approach phase (drive the gripper to the handle, engage), a
// manipulation phase, and a hold phase once the goal margin is cleared, so a
// full-length rollout ends with a static tail.
Action expert_action(const World& w);

// A full scripted rollout: tracked keypoints for every frame (initial frame
// plus one per step), the object pose per frame, and the success outcome.
struct ExpertTrace {
    FlowFile flow;
    std::vector<Pose2> object_poses;
    bool succeeded = false;
    int success_step = -1;
};

// Rolls the scripted controller for the full episode length and records the
// trace. Throws ScriptFailure if the rollout does not reach the goal.
ExpertTrace record_expert(TaskId task, std::uint64_t seed, int keypoint_count);

}  // namespace dflow::sim
