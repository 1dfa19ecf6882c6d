#include "dflow/sim/world.hpp"

#include <algorithm>
#include <cmath>

#include "dflow/rng.hpp"

namespace dflow::sim {

namespace {

double clampd(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

Vec2 clamp_canvas(Vec2 p) {
    p.x = clampd(p.x, 0.0, kCanvas);
    p.y = clampd(p.y, 0.0, kCanvas);
    return p;
}

Pose2 pivot_pose(const TaskSpec& spec, double theta) {
    // The board's anchored end stays at the anchor; the body +x axis points
    // from center to anchor, so sweeping the free end upward by theta turns
    // the body heading to -theta.
    const Vec2 center = spec.anchor + Vec2{-std::cos(theta), std::sin(theta)} * spec.half_size.x;
    return Pose2{center, -theta};
}

std::vector<Vec2> rect_corners(const Pose2& pose, Vec2 half) {
    return {pose.apply({half.x, -half.y}), pose.apply({half.x, half.y}),
            pose.apply({-half.x, half.y}), pose.apply({-half.x, -half.y})};
}

bool object_blocked_at(const TaskSpec& spec, const Pose2& pose) {
    if (!spec.has_wall()) return false;
    const auto corners = rect_corners(pose, spec.half_size);
    return polygon_intersects_segment(corners, spec.wall_a, spec.wall_b);
}

// A point at distance [range_lo, range_hi] from `from` in a uniform random
// direction, redrawn until it lands inside the given rectangle. The draws are
// seeded, so the rejection loop is deterministic per seed.
Vec2 place_at_range(Rng& rng, const Vec2& from, double range_lo, double range_hi, double box_lo_x,
                    double box_hi_x, double box_lo_y, double box_hi_y) {
    for (;;) {
        const double dist = rng.uniform(range_lo, range_hi);
        const double angle = rng.uniform(0.0, 6.283185307179586476925286766559);
        const Vec2 p = from + Vec2{std::cos(angle), std::sin(angle)} * dist;
        if (p.x >= box_lo_x && p.x <= box_hi_x && p.y >= box_lo_y && p.y <= box_hi_y) return p;
    }
}

bool gripper_motion_blocked(const TaskSpec& spec, const Vec2& from, const Vec2& to) {
    if (!spec.has_wall()) return false;
    return segments_intersect(from, to, spec.wall_a, spec.wall_b);
}

bool success_condition(const World& w) {
    const WorldState& st = w.state;
    if (!st.subgoal_reached) return false;
    switch (w.spec.id) {
        case TaskId::PickPlace:
            return (st.object.p - w.spec.target).norm() <= kPlaceRadius;
        case TaskId::Pour: {
            const double heading = wrap_angle(st.object.theta);
            return (st.object.p - w.spec.pour_point()).norm() <= kPourRadius &&
                   heading > kPourHeadingLo && heading < kPourHeadingHi;
        }
        case TaskId::Open:
            return st.drawer_travel >= kOpenSuccess;
        case TaskId::Pivot:
            return st.pivot_theta >= kPivotSuccess;
    }
    return false;
}

void try_attach(World& w, WorldEvents& ev) {
    WorldState& st = w.state;
    if (st.attached) return;
    if (w.spec.uses_grasp && !st.grip_closed) return;
    if (grip_distance(w) > kCaptureRadius) return;
    st.attached = true;
    st.grasp_offset = rotate(st.object.p - st.gripper.p, -st.gripper.theta);
    st.grasp_rel_theta = st.object.theta - st.gripper.theta;
    if (!st.subgoal_reached) {
        st.subgoal_reached = true;
        ev.subgoal_now = true;
    }
}

void substep(World& w, const Action& a, WorldEvents& ev) {
    WorldState& st = w.state;
    const TaskSpec& spec = w.spec;

    if (spec.uses_grasp) {
        const bool want_closed = a.grip > 0.0;
        if (!want_closed && st.grip_closed) st.attached = false;  // release in place
        st.grip_closed = want_closed;
    }
    try_attach(w, ev);

    const Vec2 dp{a.dx * kSubstepXY, a.dy * kSubstepXY};
    const double dth = a.dtheta * kSubstepTheta;

    if (!st.attached) {
        const Vec2 to = clamp_canvas(st.gripper.p + dp);
        if (!gripper_motion_blocked(spec, st.gripper.p, to)) st.gripper.p = to;
        st.gripper.theta = wrap_angle(st.gripper.theta + dth);
        try_attach(w, ev);  // may have arrived within reach this substep
        return;
    }

    switch (spec.id) {
        case TaskId::PickPlace:
        case TaskId::Pour: {
            // Free-floating grasp: the object follows the gripper rigidly.
            st.gripper.p = clamp_canvas(st.gripper.p + dp);
            st.gripper.theta = wrap_angle(st.gripper.theta + dth);
            st.object.p = st.gripper.p + rotate(st.grasp_offset, st.gripper.theta);
            st.object.theta = wrap_angle(st.gripper.theta + st.grasp_rel_theta);
            break;
        }
        case TaskId::Open: {
            // Prismatic joint along +x: every command is projected onto the
            // axis; heading and lateral motion are absorbed by the constraint.
            const double next = clampd(st.drawer_travel + dp.x, 0.0, kDrawerTravelMax);
            const double shift = next - st.drawer_travel;
            st.drawer_travel = next;
            st.gripper.p.x += shift;
            st.object.p = spec.drawer_base + Vec2{st.drawer_travel, 0.0};
            break;
        }
        case TaskId::Pivot: {
            // Revolute joint about the anchor: translation commands act
            // tangentially on the contact point. The body sweeps clockwise
            // (heading -theta) as the free end rises.
            const Vec2 arm = handle_world(w) - spec.anchor;
            const double dtheta_obj = -cross2(arm, dp) / arm.squared_norm();
            const double next = clampd(st.pivot_theta + dtheta_obj, 0.0, kPivotThetaMax);
            const Pose2 pose = pivot_pose(spec, next);
            if (!object_blocked_at(spec, pose)) {
                st.pivot_theta = next;
                st.object = pose;
            }
            st.gripper.p = handle_world(w);  // stay on the contact point
            st.gripper.theta = wrap_angle(st.gripper.theta + dth);
            break;
        }
    }
}

}  // namespace

TaskId task_from_name(const std::string& name) {
    if (name == "pick-place") return TaskId::PickPlace;
    if (name == "pour") return TaskId::Pour;
    if (name == "open") return TaskId::Open;
    if (name == "pivot") return TaskId::Pivot;
    throw UnknownTask("unknown task '" + name + "' (known: pick-place, pour, open, pivot)");
}

const char* task_name(TaskId id) {
    switch (id) {
        case TaskId::PickPlace: return "pick-place";
        case TaskId::Pour: return "pour";
        case TaskId::Open: return "open";
        case TaskId::Pivot: return "pivot";
    }
    return "?";
}

const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names{"pick-place", "pour", "open", "pivot"};
    return names;
}

Action Action::clamped() const {
    auto c = [](double v) { return clampd(v, -1.0, 1.0); };
    return {c(dx), c(dy), c(dtheta), c(grip)};
}

bool Action::finite() const {
    return std::isfinite(dx) && std::isfinite(dy) && std::isfinite(dtheta) && std::isfinite(grip);
}

std::vector<Vec2> contour_keypoints(Vec2 half, int count) {
    if (count < 1) throw InvariantViolation("contour keypoint count must be >= 1");
    const double w = 2.0 * half.x;
    const double h = 2.0 * half.y;
    const double perimeter = 2.0 * (w + h);
    std::vector<Vec2> pts(count);
    for (int i = 0; i < count; ++i) {
        double s = perimeter * static_cast<double>(i) / static_cast<double>(count);
        Vec2 p;
        if (s < h) {
            p = Vec2{half.x, -half.y + s};  // right edge, upward
        } else if (s < h + w) {
            p = Vec2{half.x - (s - h), half.y};  // top edge, leftward
        } else if (s < 2.0 * h + w) {
            p = Vec2{-half.x, half.y - (s - h - w)};  // left edge, downward
        } else {
            p = Vec2{-half.x + (s - 2.0 * h - w), -half.y};  // bottom edge, rightward
        }
        pts[i] = p;
    }
    return pts;
}

World make_world(TaskId task, std::uint64_t seed, int keypoint_count) {
    Rng rng(seed, rng_stream::kLayout);
    World w;
    TaskSpec& spec = w.spec;
    spec.id = task;
    spec.gripper_start = Vec2{rng.uniform(40.0, 120.0), rng.uniform(40.0, 120.0)};

    switch (task) {
        case TaskId::PickPlace:
            spec.half_size = Vec2{24.0, 24.0};
            spec.handle_local = Vec2{0.0, 0.0};
            spec.object_start = Vec2{rng.uniform(140.0, 280.0), rng.uniform(140.0, 340.0)};
            spec.target =
                place_at_range(rng, spec.object_start, 110.0, 170.0, 60.0, 420.0, 60.0, 420.0);
            break;
        case TaskId::Pour:
            spec.half_size = Vec2{20.0, 20.0};
            spec.handle_local = Vec2{0.0, 0.0};
            spec.object_start = Vec2{rng.uniform(140.0, 280.0), rng.uniform(160.0, 340.0)};
            // The goal region sits above the bowl, so keep the bowl low enough
            // for the pour point to stay inside the canvas.
            spec.target =
                place_at_range(rng, spec.object_start, 110.0, 170.0, 60.0, 420.0, 60.0, 350.0);
            break;
        case TaskId::Open:
            spec.half_size = Vec2{25.0, 40.0};
            spec.handle_local = Vec2{25.0, 0.0};
            spec.drawer_base = Vec2{rng.uniform(150.0, 260.0), rng.uniform(140.0, 340.0)};
            spec.object_start = spec.drawer_base;
            break;
        case TaskId::Pivot: {
            spec.half_size = Vec2{60.0, 8.0};
            spec.handle_local = Vec2{-54.0, 0.0};
            spec.uses_grasp = false;
            const double cx = rng.uniform(120.0, 240.0);
            spec.object_start = Vec2{cx, 90.0};
            spec.anchor = spec.object_start + Vec2{spec.half_size.x, 0.0};
            spec.wall_a = spec.anchor + Vec2{30.0, 34.0};
            spec.wall_b = spec.anchor + Vec2{30.0, 104.0};
            break;
        }
    }
    spec.body_keypoints = contour_keypoints(spec.half_size, keypoint_count);

    WorldState& st = w.state;
    st.gripper = Pose2{spec.gripper_start, 0.0};
    st.object = Pose2{spec.object_start, 0.0};
    return w;
}

Vec2 handle_world(const World& w) { return w.state.object.apply(w.spec.handle_local); }

double grip_distance(const World& w) { return (w.state.gripper.p - handle_world(w)).norm(); }

std::vector<Vec2> object_polygon(const World& w) {
    return rect_corners(w.state.object, w.spec.half_size);
}

WorldEvents world_step(World& w, const Action& action) {
    if (!action.finite()) throw InvariantViolation("non-finite action component");
    const Action a = action.clamped();
    WorldEvents ev;
    for (int k = 0; k < kSubstepsPerAction; ++k) substep(w, a, ev);
    if (!w.state.succeeded && success_condition(w)) {
        w.state.succeeded = true;
        ev.success_now = true;
    }
    ++w.state.step;
    return ev;
}

bool occluded_by_wall(const TaskSpec& spec, const Vec2& p) {
    if (!spec.has_wall()) return false;
    // The viewer sits at x = +inf looking toward -x; the wall is vertical.
    const double wall_x = spec.wall_a.x;
    const double y_lo = std::min(spec.wall_a.y, spec.wall_b.y);
    const double y_hi = std::max(spec.wall_a.y, spec.wall_b.y);
    return p.x < wall_x && p.y >= y_lo && p.y <= y_hi;
}

void oracle_track(const World& w, std::vector<Vec2>& positions,
                  std::vector<std::uint8_t>& visibility) {
    const std::size_t n = w.spec.body_keypoints.size();
    positions.resize(n);
    visibility.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        positions[i] = w.state.object.apply(w.spec.body_keypoints[i]);
        visibility[i] = occluded_by_wall(w.spec, positions[i]) ? 0 : 1;
    }
}

}  // namespace dflow::sim
