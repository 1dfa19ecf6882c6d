#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dflow/error.hpp"
#include "dflow/flow.hpp"
#include "dflow/geometry.hpp"

namespace dflow::sim {

enum class TaskId { PickPlace, Pour, Open, Pivot };

TaskId task_from_name(const std::string& name);  // throws UnknownTask
const char* task_name(TaskId id);
const std::vector<std::string>& task_names();

// Canvas and kinematic limits.
constexpr double kCanvas = 480.0;
constexpr int kSubstepsPerAction = 3;   // integration substeps per policy action
constexpr double kSubstepXY = 8.0;      // px per substep at full command
constexpr double kSubstepTheta = 0.1;   // rad per substep at full command
constexpr int kMaxEpisodeSteps = 99;    // policy steps; tracked flow has 100 frames

// Interaction and goal thresholds.
constexpr double kCaptureRadius = 14.0;    // grasp/contact engagement distance
constexpr double kPlaceRadius = 20.0;      // pick-place success distance
constexpr double kPourRadius = 25.0;       // pour-point success distance
constexpr double kPourHeadingLo = 5.0 * 3.14159265358979323846 / 16.0;
constexpr double kPourHeadingHi = 7.0 * 3.14159265358979323846 / 16.0;
constexpr double kPourSpoutHeight = 60.0;  // pour point sits this far above the bowl
constexpr double kDrawerTravelMax = 80.0;  // prismatic range, px
constexpr double kOpenSuccess = 48.0;      // 0.1 canvas widths
constexpr double kPivotSuccess = 1.0;      // rad swept about the anchor
constexpr double kPivotThetaMax = 3.14159265358979323846 / 2.0;
constexpr double kPivotArmLength = 114.0;  // anchor -> handle distance

// Immutable per-episode task data: placements, object shape, wall.
struct TaskSpec {
    TaskId id = TaskId::PickPlace;
    Vec2 gripper_start;
    Vec2 object_start;     // object center at reset
    Vec2 target;           // pick-place target / pour bowl center
    Vec2 drawer_base;      // open: body center at travel 0
    Vec2 anchor;           // pivot: fixed rotation point
    Vec2 wall_a, wall_b;   // pivot: vertical obstacle/occluder segment
    Vec2 half_size;        // object rectangle half extents
    Vec2 handle_local;     // grasp/contact point in the body frame
    bool uses_grasp = true;         // pivot engages by contact instead
    std::vector<Vec2> body_keypoints;  // contour keypoints in the body frame

    Vec2 pour_point() const { return target + Vec2{0.0, kPourSpoutHeight}; }
    bool has_wall() const { return id == TaskId::Pivot; }
};

// Mutable episode state.
struct WorldState {
    Pose2 gripper;
    bool grip_closed = false;
    bool attached = false;      // grasp (or pivot contact) engaged
    Pose2 object;
    Vec2 grasp_offset;          // object center in the gripper frame while attached
    double grasp_rel_theta = 0.0;
    double drawer_travel = 0.0;  // open task prismatic coordinate
    double pivot_theta = 0.0;    // pivot task swept angle
    int step = 0;                // policy steps taken
    bool subgoal_reached = false;  // latched
    bool succeeded = false;        // latched
};

struct World {
    TaskSpec spec;
    WorldState state;
};

// Planar action: per-axis commands in [-1,1]; grip > 0 commands the gripper
// closed. Commands scale to the per-substep limits.
struct Action {
    double dx = 0.0;
    double dy = 0.0;
    double dtheta = 0.0;
    double grip = -1.0;

    Action clamped() const;
    bool finite() const;
};

// One-step happenings, edge-triggered.
struct WorldEvents {
    bool subgoal_now = false;  // grasp/contact first engaged during this step
    bool success_now = false;  // goal condition first met during this step
};

// Seeded placement randomization plus contour keypoints; deterministic per
// (task, seed, keypoint_count). Throws UnknownTask.
World make_world(TaskId task, std::uint64_t seed, int keypoint_count = 128);

// Current grasp/contact point in world coordinates.
Vec2 handle_world(const World& w);

// Distance from the gripper to the handle, px.
double grip_distance(const World& w);

// Object contour polygon in world coordinates (CCW).
std::vector<Vec2> object_polygon(const World& w);

// Advances the world by one policy action (3 integration substeps with
// collision rejection and constraint projection). Returns edge-triggered
// events. Throws InvariantViolation on non-finite actions.
WorldEvents world_step(World& w, const Action& action);

// Oracle tracker: keypoints projected through the object pose; points hidden
// behind the wall (pivot) are reported with visibility 0.
void oracle_track(const World& w, std::vector<Vec2>& positions,
                  std::vector<std::uint8_t>& visibility);

// True when p is hidden from the viewer (at x = +inf, looking toward -x) by
// the task's wall segment.
bool occluded_by_wall(const TaskSpec& spec, const Vec2& p);

// K points evenly spaced along the rectangle contour, starting at the
// (+hx, -hy) corner, counter-clockwise.
std::vector<Vec2> contour_keypoints(Vec2 half_size, int count);

}  // namespace dflow::sim
