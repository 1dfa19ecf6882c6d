#include <cmath>
#include <vector>

#include "doctest.h"
#include "dflow/noise.hpp"
#include "helpers.hpp"

using namespace dflow;
using namespace dflow::testing;

TEST_CASE("random_walk: sigma zero gives all-zero offsets") {
    const auto w = random_walk(50, 0.0, 777);
    for (const auto& o : w) {
        CHECK(o.x == 0.0);
        CHECK(o.y == 0.0);
    }
}

TEST_CASE("random_walk: start is anchored for every seed") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto w = random_walk(10, 2.0, s);
        CHECK(w[0].x == 0.0);
        CHECK(w[0].y == 0.0);
    }
}

TEST_CASE("random_walk: terminal variance follows the Brownian law") {
    const int T = 40;
    const double sigma = 0.8;
    double sx = 0.0, sxx = 0.0, sy = 0.0, syy = 0.0;
    const int trials = 10000;
    for (int s = 0; s < trials; ++s) {
        const auto w = random_walk(T, sigma, 50000 + s);
        sx += w[T - 1].x;
        sxx += w[T - 1].x * w[T - 1].x;
        sy += w[T - 1].y;
        syy += w[T - 1].y * w[T - 1].y;
    }
    const double var_x = sxx / trials - (sx / trials) * (sx / trials);
    const double var_y = syy / trials - (sy / trials) * (sy / trials);
    const double expect = (T - 1) * sigma * sigma;
    CHECK(var_x == doctest::Approx(expect).epsilon(0.05));
    CHECK(var_y == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("brownian_bridge: zero endpoint and zero sigma is identically zero") {
    const auto b = brownian_bridge(30, Vec2{0.0, 0.0}, 0.0, 4);
    for (const auto& o : b) {
        CHECK(o.x == 0.0);
        CHECK(o.y == 0.0);
    }
}

TEST_CASE("brownian_bridge: endpoint pinned exactly for every seed") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto b = brownian_bridge(25, Vec2{20.0, 0.0}, 1.5, s);
        CHECK(b[0].x == 0.0);
        CHECK(b[0].y == 0.0);
        CHECK(b[24].x == 20.0);
        CHECK(b[24].y == 0.0);
    }
}

TEST_CASE("brownian_bridge: midpoint variance follows the bridge law") {
    const int T = 101;  // T-1 even, midpoint exactly halfway
    const double sigma = 0.7;
    const int mid = T / 2;
    double sxx = 0.0, sx = 0.0;
    const int trials = 10000;
    for (int s = 0; s < trials; ++s) {
        const auto b = brownian_bridge(T, Vec2{5.0, -3.0}, sigma, 90000 + s);
        sx += b[mid].x;
        sxx += b[mid].x * b[mid].x;
    }
    const double var_x = sxx / trials - (sx / trials) * (sx / trials);
    const double expect = sigma * sigma * (T - 1) / 4.0;
    CHECK(var_x == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("preset names map to the documented scale pairs") {
    CHECK(preset_from_name("gauss1-drift0").gauss_scale == 1.0);
    CHECK(preset_from_name("gauss1-drift0").drift_scale == 0.0);
    CHECK(preset_from_name("gauss4-drift0").gauss_scale == 4.0);
    CHECK(preset_from_name("gauss2-drift1").drift_scale == 1.0);
    CHECK(preset_from_name("gauss2-drift2").gauss_scale == 2.0);
    CHECK(preset_from_name("gauss2-drift2").drift_scale == 2.0);
    CHECK(preset_from_name("none").gauss_scale == 0.0);
    CHECK_THROWS_AS(preset_from_name("gauss9-drift9"), ConfigError);
}

TEST_CASE("perturb_flow: all-zero scales is the exact identity") {
    Rng rng(2);
    const auto rigid = make_rigid_flow(rng, 12, 16);
    const KeypointFlow same = perturb_flow(rigid.flow, NoisePreset{0.0, 0.0}, 9);
    CHECK(same.positions == rigid.flow.positions);
    CHECK(same.visibility == rigid.flow.visibility);
}

TEST_CASE("perturb_flow: deterministic per (seed, preset)") {
    Rng rng(3);
    const auto rigid = make_rigid_flow(rng, 15, 20);
    const NoisePreset p = preset_from_name("gauss2-drift2");
    const KeypointFlow a = perturb_flow(rigid.flow, p, 123);
    const KeypointFlow b = perturb_flow(rigid.flow, p, 123);
    const KeypointFlow c = perturb_flow(rigid.flow, p, 124);
    CHECK(a.positions == b.positions);
    CHECK(a.positions != c.positions);
}

TEST_CASE("perturb_flow: object-level noise adds the offsets to the deltas") {
    Rng rng(14);
    const auto rigid = make_rigid_flow(rng, 30, 24);
    const NoisePreset p = preset_from_name("gauss2-drift1");
    const KeypointFlow noisy = perturb_flow(rigid.flow, p, 55);
    const auto offsets = noise_offsets(30, p, kBaseSigma, kBaseDrift, 55);

    const DeltaFlow clean = delta_flow(rigid.flow);
    const DeltaFlow pert = delta_flow(noisy);
    for (int t = 0; t < 30; ++t) {
        CHECK(std::abs(pert.translations[t].x - (clean.translations[t].x + offsets[t].x)) < 1e-9);
        CHECK(std::abs(pert.translations[t].y - (clean.translations[t].y + offsets[t].y)) < 1e-9);
    }
}

TEST_CASE("perturb_flow: large-drift preset reaches the 20 px endpoint regime") {
    Rng rng(6);
    const auto rigid = make_rigid_flow(rng, 40, 16);
    const NoisePreset p = preset_from_name("gauss2-drift2");
    int reached = 0;
    const int trials = 200;
    for (int s = 0; s < trials; ++s) {
        const auto offsets = noise_offsets(40, p, kBaseSigma, kBaseDrift, 7000 + s);
        if (offsets[39].norm() >= 20.0) ++reached;
    }
    // Per-axis endpoint stddev is 20 px, so |endpoint| >= 20 px has
    // probability exp(-1/2) ~ 0.61; anything near half the trials shows the
    // regime is reached routinely.
    CHECK(reached >= trials / 2);
}
