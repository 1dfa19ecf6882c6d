#include "dflow/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dflow/rng.hpp"

namespace dflow {

KeypointFlow select_keypoints(const KeypointFlow& flow, const std::vector<int>& indices) {
    KeypointFlow out = KeypointFlow::zeros(flow.frames, static_cast<int>(indices.size()));
    for (int t = 0; t < flow.frames; ++t) {
        for (std::size_t j = 0; j < indices.size(); ++j) {
            const int i = indices[j];
            out.at(t, static_cast<int>(j)) = flow.at(t, i);
            out.set_visible(t, static_cast<int>(j), flow.visible(t, i));
        }
    }
    return out;
}

KeypointFlow motion_filter(const KeypointFlow& flow, double threshold_px) {
    flow.validate();
    if (threshold_px < 0.0) {
        throw InvariantViolation("motion threshold must be >= 0, got " +
                                 std::to_string(threshold_px));
    }
    std::vector<int> keep;
    for (int i = 0; i < flow.keypoints; ++i) {
        double max_sq = 0.0;
        for (int t = 0; t < flow.frames; ++t) {
            if (!flow.visible(t, i)) continue;
            max_sq = std::max(max_sq, (flow.at(t, i) - flow.at(0, i)).squared_norm());
        }
        if (max_sq > threshold_px * threshold_px) keep.push_back(i);
    }
    if (keep.empty()) {
        throw EmptyResult("motion filter at " + std::to_string(threshold_px) +
                          " px removed every keypoint");
    }
    return select_keypoints(flow, keep);
}

KeypointFlow mask_filter(const KeypointFlow& flow, const MaskSet& masks, double area_threshold) {
    flow.validate();
    std::vector<int> keep;
    for (int i = 0; i < flow.keypoints; ++i) {
        const Vec2& p = flow.at(0, i);
        if (masks.area_at(p.x, p.y) <= area_threshold) keep.push_back(i);
    }
    if (keep.empty()) {
        throw EmptyResult("mask filter at area " + std::to_string(area_threshold) +
                          " removed every keypoint");
    }
    return select_keypoints(flow, keep);
}

std::vector<int> subsample_indices(int total, int n, std::uint64_t seed) {
    if (n < 1) throw InvariantViolation("subsample count must be >= 1");
    std::vector<int> idx(total);
    for (int i = 0; i < total; ++i) idx[i] = i;
    if (n >= total) return idx;

    Rng rng(seed, rng_stream::kSubsample);
    // Partial Fisher-Yates: after m swaps the first m entries are a uniform
    // sample without replacement.
    for (int i = 0; i < n; ++i) {
        const int j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(total - i)));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    return idx;
}

KeypointFlow subsample(const KeypointFlow& flow, int n, std::uint64_t seed) {
    flow.validate();
    return select_keypoints(flow, subsample_indices(flow.keypoints, n, seed));
}

}  // namespace dflow
