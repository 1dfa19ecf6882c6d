#include <cmath>
#include <vector>

#include "doctest.h"
#include "dflow/noise.hpp"
#include "dflow/reward.hpp"
#include "helpers.hpp"

using namespace dflow;
using namespace dflow::testing;

namespace {

RewardScale default_scale() {
    RewardScale s;
    s.c_rot = 500.0 * 500.0;  // representative calibrated value
    return s;
}

}  // namespace

TEST_CASE("flow_match_reward: perfect match scores 1") {
    const DeltaStep step{Vec2{12.0, -7.0}, 250.0};
    CHECK(flow_match_reward(step, step, default_scale()) == 1.0);
}

TEST_CASE("flow_match_reward: translation mismatch at the clip scale scores 0") {
    const RewardScale s = default_scale();
    const DeltaStep a{Vec2{0.0, 0.0}, 100.0};
    const DeltaStep b{Vec2{48.0, 0.0}, 100.0};  // |delta|^2 = c_tr
    CHECK(flow_match_reward(a, b, s) == 0.0);
}

TEST_CASE("flow_match_reward: half-scale mismatches in both blocks score 0.5") {
    const RewardScale s = default_scale();
    const DeltaStep a{Vec2{0.0, 0.0}, 0.0};
    const DeltaStep b{Vec2{24.0, 0.0}, 250.0};  // c_tr/4 and c_rot/4
    CHECK(flow_match_reward(a, b, s) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("flow_match_reward: bounded and monotone in each mismatch") {
    const RewardScale s = default_scale();
    Rng rng(1001);
    for (int i = 0; i < 1000; ++i) {
        const DeltaStep a{Vec2{rng.uniform(-300, 300), rng.uniform(-300, 300)},
                          rng.uniform(-2000, 2000)};
        const DeltaStep b{Vec2{rng.uniform(-300, 300), rng.uniform(-300, 300)},
                          rng.uniform(-2000, 2000)};
        const double r = flow_match_reward(a, b, s);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
    }
    // Growing translation mismatch, rotation fixed.
    double prev = 2.0;
    for (double dx = 0.0; dx <= 80.0; dx += 2.0) {
        const double r = flow_match_reward({Vec2{dx, 0.0}, 50.0}, {Vec2{0.0, 0.0}, 50.0}, s);
        CHECK(r <= prev);
        prev = r;
    }
    // Growing rotation mismatch, translation fixed.
    prev = 2.0;
    for (double dr = 0.0; dr <= 900.0; dr += 30.0) {
        const double r = flow_match_reward({Vec2{3.0, 3.0}, dr}, {Vec2{3.0, 3.0}, 0.0}, s);
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("flow_match_reward: invariant to a shared global translation of both flows") {
    Rng rng(71);
    const auto rigid = make_rigid_flow(rng, 10, 20);
    auto noisy = perturb_flow(rigid.flow, preset_from_name("gauss2-drift1"), 3);
    KeypointFlow rigid_shift = rigid.flow;
    KeypointFlow noisy_shift = noisy;
    for (auto& p : rigid_shift.positions) p = p + Vec2{37.0, -12.0};
    for (auto& p : noisy_shift.positions) p = p + Vec2{37.0, -12.0};

    const RewardScale s = default_scale();
    const DeltaFlow a1 = delta_flow(rigid.flow);
    const DeltaFlow b1 = delta_flow(noisy);
    const DeltaFlow a2 = delta_flow(rigid_shift);
    const DeltaFlow b2 = delta_flow(noisy_shift);
    for (int t = 0; t < 10; ++t) {
        const double r1 = flow_match_reward(a1.step(t), b1.step(t), s);
        const double r2 = flow_match_reward(a2.step(t), b2.step(t), s);
        CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
    }
}

TEST_CASE("reaching_reward: approaches 1 at zero distance") {
    CHECK(reaching_reward(0.0) == 1.0);
    CHECK(reaching_reward(1e-9) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("reaching_reward: value at a tenth of the canvas") {
    // 1 - tanh(10 * 0.1) = 1 - tanh(1), high-precision reference value.
    CHECK(reaching_reward(0.1) == doctest::Approx(0.23840584404423515).epsilon(1e-12));
    CHECK(reaching_reward(0.1, 10.0) == doctest::Approx(1.0 - std::tanh(1.0)).epsilon(1e-15));
}

TEST_CASE("hybrid_reward: reaching emits the scaled tanh shaping") {
    const RewardScale s = default_scale();
    const HybridResult r =
        hybrid_reward(RewardPhase::Reaching, 48.0, 0.0, StepEvents{}, s);
    CHECK(r.reward == doctest::Approx(0.25 * 0.23840584404423515).epsilon(1e-12));
    CHECK(r.next_phase == RewardPhase::Reaching);
}

TEST_CASE("hybrid_reward: subgoal event pays alpha and advances") {
    const RewardScale s = default_scale();
    const HybridResult r =
        hybrid_reward(RewardPhase::Reaching, 5.0, 0.0, StepEvents{true, false}, s);
    CHECK(r.reward == 0.25);
    CHECK(r.next_phase == RewardPhase::SubgoalJustReached);
}

TEST_CASE("hybrid_reward: tracking pays alpha + beta * r_delta, capped at 1") {
    const RewardScale s = default_scale();
    const HybridResult a =
        hybrid_reward(RewardPhase::SubgoalJustReached, 0.0, 0.6, StepEvents{}, s);
    CHECK(a.reward == doctest::Approx(0.25 + 0.75 * 0.6).epsilon(1e-12));
    CHECK(a.next_phase == RewardPhase::Tracking);

    const HybridResult b = hybrid_reward(RewardPhase::Tracking, 0.0, 1.0, StepEvents{}, s);
    CHECK(b.reward == 1.0);
    CHECK(b.next_phase == RewardPhase::Tracking);
}

TEST_CASE("hybrid_reward: completion pays 1 and is absorbing") {
    const RewardScale s = default_scale();
    const HybridResult done =
        hybrid_reward(RewardPhase::Tracking, 0.0, 0.3, StepEvents{false, true}, s);
    CHECK(done.reward == 1.0);
    CHECK(done.next_phase == RewardPhase::Completed);

    const HybridResult after =
        hybrid_reward(RewardPhase::Completed, 100.0, 0.0, StepEvents{}, s);
    CHECK(after.reward == 1.0);
    CHECK(after.next_phase == RewardPhase::Completed);
}

TEST_CASE("hybrid_reward: contradictory events throw") {
    const RewardScale s = default_scale();
    CHECK_THROWS_AS(hybrid_reward(RewardPhase::Reaching, 1.0, 0.0, StepEvents{false, true}, s),
                    IllegalTransition);
    CHECK_THROWS_AS(hybrid_reward(RewardPhase::Tracking, 1.0, 0.0, StepEvents{true, false}, s),
                    IllegalTransition);
    CHECK_THROWS_AS(
        hybrid_reward(RewardPhase::SubgoalJustReached, 1.0, 0.0, StepEvents{true, false}, s),
        IllegalTransition);
    CHECK_THROWS_AS(hybrid_reward(RewardPhase::Reaching, 1.0, 1.5, StepEvents{}, s),
                    InvariantViolation);
}

TEST_CASE("hybrid_reward: simultaneous subgoal and completion jump straight to done") {
    const RewardScale s = default_scale();
    const HybridResult r =
        hybrid_reward(RewardPhase::Reaching, 1.0, 0.0, StepEvents{true, true}, s);
    CHECK(r.reward == 1.0);
    CHECK(r.next_phase == RewardPhase::Completed);
}

TEST_CASE("RewardMachine: phases only move forward, rewards stay in [0,1]") {
    Rng rng(606);
    for (int rep = 0; rep < 100; ++rep) {
        RewardMachine machine(default_scale());
        const int subgoal_at = 3 + static_cast<int>(rng.uniform_int(10));
        const int done_at = subgoal_at + 2 + static_cast<int>(rng.uniform_int(10));
        int prev_rank = 0;
        double cumulative = 0.0;
        double prev_cumulative = -1.0;
        for (int t = 0; t < 30; ++t) {
            StepEvents ev;
            if (machine.phase() == RewardPhase::Reaching) ev.subgoal_done = (t == subgoal_at);
            if (machine.phase() != RewardPhase::Reaching &&
                machine.phase() != RewardPhase::Completed) {
                ev.task_done = (t >= done_at);
            }
            const double r = machine.step(rng.uniform(0.0, 200.0), rng.uniform01(), ev);
            CHECK(r >= 0.0);
            CHECK(r <= 1.0);
            CHECK(r > 0.0);  // every phase pays something, so the sum is strictly increasing
            cumulative += r;
            CHECK(cumulative > prev_cumulative);
            prev_cumulative = cumulative;
            const int rank = static_cast<int>(machine.phase());
            CHECK(rank >= prev_rank);
            prev_rank = rank;
        }
        CHECK(machine.phase() == RewardPhase::Completed);
    }
}

TEST_CASE("pose rewards: identity, clip boundary, wrap, and formula oracle") {
    const RewardScale s = default_scale();
    std::vector<Pose2> traj{{{10.0, 20.0}, 0.5}, {{11.0, 21.0}, 0.6}, {{12.0, 22.0}, 0.7}};
    CHECK(pose_trajectory_reward(traj, traj, s) == 1.0);

    // Position mismatch exactly at the clip scale.
    std::vector<Pose2> off = traj;
    for (auto& p : off) p.p.x += 48.0;
    CHECK(pose_trajectory_reward(off, traj, s) == 0.0);

    // Heading differing by a full turn is no mismatch at all.
    std::vector<Pose2> wrapped = traj;
    for (auto& p : wrapped) p.theta += 2.0 * 3.14159265358979323846;
    CHECK(pose_trajectory_reward(wrapped, traj, s) == doctest::Approx(1.0).epsilon(1e-9));

    // Random mismatch against a hand-written formula.
    Rng rng(88);
    for (int rep = 0; rep < 50; ++rep) {
        const Pose2 a{{rng.uniform(0, 480), rng.uniform(0, 480)}, rng.uniform(-3, 3)};
        const Pose2 b{{rng.uniform(0, 480), rng.uniform(0, 480)}, rng.uniform(-3, 3)};
        const double dx = a.p.x - b.p.x, dy = a.p.y - b.p.y;
        double dth = std::fmod(a.theta - b.theta, 2.0 * 3.14159265358979323846);
        if (dth > 3.14159265358979323846) dth -= 2.0 * 3.14159265358979323846;
        if (dth <= -3.14159265358979323846) dth += 2.0 * 3.14159265358979323846;
        double expect =
            1.0 - std::min(1.0, std::max(0.0, (dx * dx + dy * dy) / s.c_tr +
                                                  dth * dth / s.c_heading));
        CHECK(pose_step_reward(a, b, s) == doctest::Approx(expect).epsilon(1e-12));
    }

    std::vector<Pose2> shorter(traj.begin(), traj.begin() + 2);
    CHECK_THROWS_AS(pose_trajectory_reward(shorter, traj, s), CountMismatch);
}

TEST_CASE("keypoint_endpoint_reward: identity, clip boundary, oracle, count check") {
    const RewardScale s = default_scale();
    std::vector<Vec2> pts{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
    CHECK(keypoint_endpoint_reward(pts, pts, s) == 1.0);

    std::vector<Vec2> off = pts;
    for (auto& p : off) p.x += 48.0;  // mean error^2 = c_tr
    CHECK(keypoint_endpoint_reward(off, pts, s) == 0.0);

    Rng rng(99);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Vec2> a, b;
        for (int i = 0; i < 8; ++i) {
            a.push_back({rng.uniform(0, 480), rng.uniform(0, 480)});
            b.push_back({a.back().x + rng.uniform(-30, 30), a.back().y + rng.uniform(-30, 30)});
        }
        double mean_sq = 0.0;
        for (int i = 0; i < 8; ++i) mean_sq += (a[i] - b[i]).squared_norm();
        mean_sq /= 8.0;
        const double expect = 1.0 - std::min(1.0, mean_sq / s.c_tr);
        CHECK(keypoint_endpoint_reward(a, b, s) == doctest::Approx(expect).epsilon(1e-12));
    }

    std::vector<Vec2> shorter(pts.begin(), pts.begin() + 2);
    CHECK_THROWS_AS(keypoint_endpoint_reward(shorter, pts, s), CountMismatch);
    CHECK_THROWS_AS(keypoint_endpoint_reward({}, {}, s), CountMismatch);
}

TEST_CASE("calibrate_rotation_scale: p90 of the squared rotation statistic") {
    Rng rng(515);
    const auto rigid = make_contour_rigid_flow(rng, 21, 64, 30.0, 120.0, 1.2);
    const RewardScale s = calibrate_rotation_scale(RewardScale{}, rigid.flow);

    const DeltaFlow d = delta_flow(rigid.flow);
    std::vector<double> sq;
    for (int t = 1; t < 21; ++t) sq.push_back(d.rotations[t] * d.rotations[t]);
    std::sort(sq.begin(), sq.end());
    const double p90 = sq[static_cast<std::size_t>(0.9 * (sq.size() - 1))];
    // Rotation ramps to 1.2 rad on a 30 px contour, so p90 dominates the floor.
    CHECK(p90 > 0.2 * 900.0 * 0.2 * 900.0);
    CHECK(s.c_rot == doctest::Approx(p90).epsilon(1e-12));
}

TEST_CASE("calibrate_rotation_scale: rotation-free flows fall back to the spread floor") {
    KeypointFlow flow = KeypointFlow::zeros(5, 4);
    const std::vector<Vec2> square{{200, 200}, {260, 200}, {260, 260}, {200, 260}};
    for (int t = 0; t < 5; ++t) {
        for (int i = 0; i < 4; ++i) flow.at(t, i) = square[i] + Vec2{12.0 * t, 0.0};
    }
    const RewardScale s = calibrate_rotation_scale(RewardScale{}, flow);
    // Mean squared radius of the square corners is 2 * 30^2 = 1800.
    CHECK(s.c_rot == doctest::Approx(0.2 * 1800.0 * 0.2 * 1800.0).epsilon(1e-12));

    // A tiny object pushes the floor below 1, where the absolute floor holds.
    KeypointFlow tiny = KeypointFlow::zeros(3, 4);
    const std::vector<Vec2> dot{{100.0, 100.0}, {100.4, 100.0}, {100.4, 100.4}, {100.0, 100.4}};
    for (int t = 0; t < 3; ++t) {
        for (int i = 0; i < 4; ++i) tiny.at(t, i) = dot[i] + Vec2{30.0 * t, 5.0};
    }
    CHECK(calibrate_rotation_scale(RewardScale{}, tiny).c_rot == 1.0);
}

TEST_CASE("reward variant names round-trip") {
    for (const char* name : {"delta-flow", "pose-traj", "keypoint-endpoint", "sparse-only"}) {
        CHECK(reward_variant_name(reward_variant_from_name(name)) == std::string(name));
    }
    CHECK_THROWS_AS(reward_variant_from_name("image-goal"), ConfigError);
}

TEST_CASE("RewardScale::validate rejects bad parameterizations") {
    RewardScale s;
    CHECK_NOTHROW(s.validate());
    RewardScale bad1 = s;
    bad1.c_tr = 0.0;
    CHECK_THROWS_AS(bad1.validate(), InvariantViolation);
    RewardScale bad2 = s;
    bad2.alpha = 0.5;
    bad2.beta = 0.75;
    CHECK_THROWS_AS(bad2.validate(), InvariantViolation);
    RewardScale bad3 = s;
    bad3.tau = -1.0;
    CHECK_THROWS_AS(bad3.validate(), InvariantViolation);
}
