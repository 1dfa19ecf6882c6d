#pragma once

// Shared fixture builders and independent reference implementations used as
// oracles across the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dflow/flow.hpp"
#include "dflow/geometry.hpp"
#include "dflow/rng.hpp"

namespace dflow::testing {

// Random keypoint cloud centered on `center`, spread ~radius.
inline std::vector<Vec2> random_cloud(Rng& rng, int n, Vec2 center, double radius) {
    std::vector<Vec2> pts(n);
    for (auto& p : pts) {
        p = center + Vec2{rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
    }
    return pts;
}

struct RigidFlowTruth {
    KeypointFlow flow;
    std::vector<Vec2> translations;   // u_t applied at each frame
    std::vector<double> angles;       // theta_t applied at each frame
    double mean_sq_radius = 0.0;      // mean |p_i^0 - centroid|^2
};

// Builds a flow where frame t is the base cloud rotated by theta_t about its
// own centroid and then translated by u_t. Closed form for the condensed
// statistics: translation u_t, rotation -sin(theta_t) * mean_sq_radius.
inline RigidFlowTruth make_rigid_flow(Rng& rng, int frames, int keypoints,
                                      double max_shift = 80.0, double max_angle = 3.0) {
    RigidFlowTruth out;
    out.flow = KeypointFlow::zeros(frames, keypoints);
    out.translations.assign(frames, Vec2{0.0, 0.0});
    out.angles.assign(frames, 0.0);

    const Vec2 center{240.0, 240.0};
    std::vector<Vec2> base = random_cloud(rng, keypoints, center, 90.0);
    Vec2 c0{0.0, 0.0};
    for (const auto& p : base) c0 = c0 + p;
    c0 = c0 / static_cast<double>(keypoints);

    double msr = 0.0;
    for (const auto& p : base) msr += (p - c0).squared_norm();
    out.mean_sq_radius = msr / static_cast<double>(keypoints);

    for (int t = 0; t < frames; ++t) {
        Vec2 u{0.0, 0.0};
        double theta = 0.0;
        if (t > 0) {
            u = Vec2{rng.uniform(-max_shift, max_shift), rng.uniform(-max_shift, max_shift)};
            theta = rng.uniform(-max_angle, max_angle);
        }
        out.translations[t] = u;
        out.angles[t] = theta;
        for (int i = 0; i < keypoints; ++i) {
            out.flow.at(t, i) = c0 + u + rotate(base[i] - c0, theta);
        }
    }
    return out;
}

// Rigid flow whose keypoints sit on the object contour (a circle of the given
// radius), with translation and rotation ramping up over the episode the way
// a manipulation rollout does. Angles get a sub-spacing jitter so clouds
// differ between trials while keeping the exact contour radius.
inline RigidFlowTruth make_contour_rigid_flow(Rng& rng, int frames, int keypoints,
                                              double radius = 27.0,
                                              double final_shift = 200.0,
                                              double final_angle = 1.0) {
    RigidFlowTruth out;
    out.flow = KeypointFlow::zeros(frames, keypoints);
    out.translations.assign(frames, Vec2{0.0, 0.0});
    out.angles.assign(frames, 0.0);
    out.mean_sq_radius = radius * radius;

    const Vec2 c0{240.0, 240.0};
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    std::vector<Vec2> base(keypoints);
    for (int i = 0; i < keypoints; ++i) {
        const double ang = kTwoPi * (i + rng.uniform01() * 0.9) / keypoints;
        base[i] = c0 + Vec2{radius * std::cos(ang), radius * std::sin(ang)};
    }
    const Vec2 dir{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double dn = std::max(dir.norm(), 1e-9);
    for (int t = 0; t < frames; ++t) {
        const double f = frames > 1 ? static_cast<double>(t) / (frames - 1) : 0.0;
        out.translations[t] = dir / dn * (final_shift * f);
        out.angles[t] = final_angle * f;
        for (int i = 0; i < keypoints; ++i) {
            out.flow.at(t, i) = c0 + out.translations[t] + rotate(base[i] - c0, out.angles[t]);
        }
    }
    return out;
}

// Aggregate relative mismatch between two series, as L2 ratio over all steps.
inline double series_relative_error(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        num += (a[t] - b[t]).squared_norm();
        den += b[t].squared_norm();
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

inline double series_relative_error(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        num += (a[t] - b[t]) * (a[t] - b[t]);
        den += b[t] * b[t];
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

// Independent plain-loop reference for the condensed flow statistics, written
// as two explicit passes so it shares no code with the library version.
struct ReferenceDelta {
    std::vector<Vec2> centroids;
    std::vector<Vec2> translations;
    std::vector<double> rotations;
};

inline ReferenceDelta reference_delta_flow(const KeypointFlow& flow) {
    ReferenceDelta ref;
    const int T = flow.frames;
    const int N = flow.keypoints;
    ref.centroids.resize(T);
    ref.translations.resize(T);
    ref.rotations.resize(T);
    for (int t = 0; t < T; ++t) {
        std::vector<int> joint;
        for (int i = 0; i < N; ++i) {
            if (flow.visible(0, i) && flow.visible(t, i)) joint.push_back(i);
        }
        double sx = 0.0, sy = 0.0, ax = 0.0, ay = 0.0;
        for (int i : joint) {
            sx += flow.at(t, i).x;
            sy += flow.at(t, i).y;
            ax += flow.at(0, i).x;
            ay += flow.at(0, i).y;
        }
        const double n = static_cast<double>(joint.size());
        const Vec2 ct{sx / n, sy / n};
        const Vec2 c0{ax / n, ay / n};
        double rot = 0.0;
        for (int i : joint) {
            const double vx = flow.at(t, i).x - ct.x;
            const double vy = flow.at(t, i).y - ct.y;
            const double wx = flow.at(0, i).x - c0.x;
            const double wy = flow.at(0, i).y - c0.y;
            rot += vx * wy - vy * wx;
        }
        ref.centroids[t] = ct;
        ref.translations[t] = ct - c0;
        ref.rotations[t] = rot / n;
    }
    return ref;
}

}  // namespace dflow::testing
