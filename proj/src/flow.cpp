#include "dflow/flow.hpp"

#include <cmath>
#include <string>

namespace dflow {

KeypointFlow KeypointFlow::zeros(int frames, int keypoints) {
    KeypointFlow f;
    f.frames = frames;
    f.keypoints = keypoints;
    f.positions.assign(static_cast<std::size_t>(frames) * keypoints, Vec2{0.0, 0.0});
    f.visibility.assign(static_cast<std::size_t>(frames) * keypoints, 1);
    return f;
}

void KeypointFlow::validate() const {
    if (frames < 2 || keypoints < 1) {
        throw InvariantViolation("flow must have >= 2 frames and >= 1 keypoint, got T=" +
                                 std::to_string(frames) + " N=" + std::to_string(keypoints));
    }
    const std::size_t expect = static_cast<std::size_t>(frames) * keypoints;
    if (positions.size() != expect || visibility.size() != expect) {
        throw InvariantViolation("flow array sizes do not match frames*keypoints");
    }
    for (std::size_t idx = 0; idx < positions.size(); ++idx) {
        if (!positions[idx].finite()) {
            throw InvariantViolation("non-finite keypoint position at flat index " +
                                     std::to_string(idx));
        }
    }
}

Vec2 centroid(std::span<const Vec2> frame_positions,
              std::span<const std::uint8_t> frame_visibility,
              int min_visible) {
    Vec2 sum{0.0, 0.0};
    int n = 0;
    for (std::size_t i = 0; i < frame_positions.size(); ++i) {
        if (frame_visibility[i] != 0) {
            sum = sum + frame_positions[i];
            ++n;
        }
    }
    if (n < min_visible) {
        throw TooFewVisible("centroid needs >= " + std::to_string(min_visible) +
                            " visible keypoints, got " + std::to_string(n));
    }
    return sum / static_cast<double>(n);
}

DeltaFlow delta_flow(const KeypointFlow& flow, int min_visible) {
    flow.validate();
    const int T = flow.frames;
    const int N = flow.keypoints;

    DeltaFlow out;
    out.centroids.resize(T);
    out.translations.resize(T);
    out.rotations.resize(T);

    for (int t = 0; t < T; ++t) {
        // Keypoints must be visible in both the anchor frame and frame t so
        // the two means are taken over the same subset.
        Vec2 sum_t{0.0, 0.0};
        Vec2 sum_0{0.0, 0.0};
        int n = 0;
        for (int i = 0; i < N; ++i) {
            if (flow.visible(0, i) && flow.visible(t, i)) {
                sum_t = sum_t + flow.at(t, i);
                sum_0 = sum_0 + flow.at(0, i);
                ++n;
            }
        }
        if (n < min_visible) {
            throw TooFewVisible("frame " + std::to_string(t) + " shares only " +
                                std::to_string(n) + " visible keypoints with frame 0 (need " +
                                std::to_string(min_visible) + ")");
        }
        const Vec2 c_t = sum_t / static_cast<double>(n);
        const Vec2 c_0 = sum_0 / static_cast<double>(n);

        double rot = 0.0;
        for (int i = 0; i < N; ++i) {
            if (flow.visible(0, i) && flow.visible(t, i)) {
                rot += cross2(flow.at(t, i) - c_t, flow.at(0, i) - c_0);
            }
        }
        rot /= static_cast<double>(n);

        out.centroids[t] = c_t;
        out.translations[t] = c_t - c_0;
        out.rotations[t] = rot;
    }
    // For t = 0 both sums accumulate identical terms in identical order, so
    // the anchor entries are exactly zero; keep that as a hard guarantee.
    out.translations[0] = Vec2{0.0, 0.0};
    out.rotations[0] = 0.0;
    return out;
}

int align_flow_index(int episode_step, int episode_len, int flow_len) {
    if (episode_len < 2) {
        throw InvalidLength("episode_len must be >= 2, got " + std::to_string(episode_len));
    }
    if (flow_len < 2) {
        throw InvalidLength("flow_len must be >= 2, got " + std::to_string(flow_len));
    }
    if (episode_step < 0 || episode_step >= episode_len) {
        throw InvalidLength("episode_step " + std::to_string(episode_step) +
                            " outside [0, " + std::to_string(episode_len) + ")");
    }
    const double scaled = static_cast<double>(episode_step) *
                          static_cast<double>(flow_len - 1) /
                          static_cast<double>(episode_len - 1);
    int idx = static_cast<int>(std::lround(scaled));
    if (idx < 0) idx = 0;
    if (idx > flow_len - 1) idx = flow_len - 1;
    return idx;
}

}  // namespace dflow
