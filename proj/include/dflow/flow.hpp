#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dflow/error.hpp"
#include "dflow/geometry.hpp"

namespace dflow {

// Fewer visible keypoints than this makes the rotation statistic meaningless.
constexpr int kMinVisible = 4;

// Raw object-centric flow: per-frame 2D keypoint positions with visibility,
// row-major [frame][keypoint].
struct KeypointFlow {
    int frames = 0;     // T
    int keypoints = 0;  // N
    std::vector<Vec2> positions;            // frames * keypoints
    std::vector<std::uint8_t> visibility;   // frames * keypoints, 0/1

    static KeypointFlow zeros(int frames, int keypoints);

    Vec2& at(int t, int i) { return positions[static_cast<std::size_t>(t) * keypoints + i]; }
    const Vec2& at(int t, int i) const {
        return positions[static_cast<std::size_t>(t) * keypoints + i];
    }
    bool visible(int t, int i) const {
        return visibility[static_cast<std::size_t>(t) * keypoints + i] != 0;
    }
    void set_visible(int t, int i, bool v) {
        visibility[static_cast<std::size_t>(t) * keypoints + i] = v ? 1 : 0;
    }

    std::span<const Vec2> frame_positions(int t) const {
        return {positions.data() + static_cast<std::size_t>(t) * keypoints,
                static_cast<std::size_t>(keypoints)};
    }
    std::span<const std::uint8_t> frame_visibility(int t) const {
        return {visibility.data() + static_cast<std::size_t>(t) * keypoints,
                static_cast<std::size_t>(keypoints)};
    }

    // Throws InvariantViolation unless T >= 2, N >= 1, array sizes agree, and
    // every position (visible or not) is finite.
    void validate() const;
};

// One timestep of condensed motion: centroid translation relative to the
// first frame plus the signed mean-cross-product rotation statistic.
struct DeltaStep {
    Vec2 translation;      // pixels
    double rotation = 0.0; // pixels^2, signed
};

// Per-timestep condensed motion statistics of a whole flow.
struct DeltaFlow {
    std::vector<Vec2> centroids;     // mean over keypoints jointly visible with frame 0
    std::vector<Vec2> translations;  // centroid[t] - centroid of frame 0 (same subset)
    std::vector<double> rotations;   // mean signed cross product, pixels^2

    int size() const { return static_cast<int>(centroids.size()); }
    DeltaStep step(int t) const { return {translations[t], rotations[t]}; }
};

// Arithmetic mean of the visible keypoints. Throws TooFewVisible when fewer
// than min_visible points are visible.
Vec2 centroid(std::span<const Vec2> frame_positions,
              std::span<const std::uint8_t> frame_visibility,
              int min_visible = kMinVisible);

// Condenses a flow into per-timestep statistics. For each frame t the subset
// of keypoints visible in BOTH frame 0 and frame t is used for the frame-t
// centroid, the paired frame-0 centroid, and the rotation statistic:
//   rotation[t] = mean_i cross2(p_i^t - centroid^t, p_i^0 - centroid^0).
// translations[0] and rotations[0] are exactly zero by construction.
DeltaFlow delta_flow(const KeypointFlow& flow, int min_visible = kMinVisible);

// Maps an episode step onto a reference-flow frame by linear interpolation of
// indices: round(step * (flow_len-1) / (episode_len-1)), clamped. Monotone in
// step; 0 -> 0 and episode_len-1 -> flow_len-1.
int align_flow_index(int episode_step, int episode_len, int flow_len);

}  // namespace dflow
