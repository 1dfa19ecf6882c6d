#pragma once

#include <cstdint>
#include <vector>

#include "dflow/flow.hpp"
#include "dflow/mask.hpp"

namespace dflow {

// Defaults for the keypoint selection stages.
constexpr double kMotionThresholdPx = 50.0;
constexpr double kMaskAreaThreshold = 10000.0;
constexpr int kDefaultKeypointCount = 128;

// New flow containing only the given keypoint columns (in the given order).
KeypointFlow select_keypoints(const KeypointFlow& flow, const std::vector<int>& indices);

// Keeps exactly the keypoints whose maximum displacement from their frame-0
// position, over the frames where they are visible, strictly exceeds
// threshold_px. Frame count is preserved. Throws EmptyResult when nothing
// survives.
KeypointFlow motion_filter(const KeypointFlow& flow, double threshold_px = kMotionThresholdPx);

// Removes keypoints whose frame-0 position falls in a mask region with area
// strictly greater than area_threshold (large regions stand in for background
// and robot arm). Throws EmptyResult when nothing survives.
KeypointFlow mask_filter(const KeypointFlow& flow, const MaskSet& masks,
                         double area_threshold = kMaskAreaThreshold);

// Uniformly samples min(n, N) keypoints without replacement with a splittable
// seeded generator; selected columns keep their original relative order, so
// n >= N is the identity. Deterministic per seed.
KeypointFlow subsample(const KeypointFlow& flow, int n, std::uint64_t seed);

// The index set subsample() would select (exposed for tests and analysis).
std::vector<int> subsample_indices(int total, int n, std::uint64_t seed);

}  // namespace dflow
