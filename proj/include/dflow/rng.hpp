#pragma once

#include <cmath>
#include <cstdint>

#include "dflow/geometry.hpp"

namespace dflow {

// Counter-based splittable generator in the SplittableRandom style: every draw
// is a hash of (key, counter), so streams can be split without sharing state
// and results never depend on call-site interleaving elsewhere in a pipeline.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(mix64(seed + kGolden) ^ mix64(stream + kGolden2))) {}

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        // Lemire's multiply-shift with rejection.
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Standard normal via Box-Muller; the second draw of each pair is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double kTwoPi = 6.283185307179586476925286766559;
        cached_ = r * std::sin(kTwoPi * u2);
        have_cached_ = true;
        return r * std::cos(kTwoPi * u2);
    }

    Vec2 normal2() {
        const double a = normal();
        const double b = normal();
        return {a, b};
    }

    // Independent child stream; deterministic in (parent key, substream).
    Rng split(std::uint64_t substream) const {
        Rng child(0);
        child.key_ = mix64(key_ ^ mix64(substream * kGolden3 + kGolden));
        child.counter_ = 0;
        child.have_cached_ = false;
        return child;
    }

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kGolden2 = 0xC2B2AE3D27D4EB4FULL;
    static constexpr std::uint64_t kGolden3 = 0x165667B19E3779F9ULL;

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

// Named substreams so unrelated consumers of one seed never collide.
namespace rng_stream {
constexpr std::uint64_t kSubsample = 1;
constexpr std::uint64_t kGaussWalk = 2;
constexpr std::uint64_t kBridge = 3;
constexpr std::uint64_t kDriftEndpoint = 4;
constexpr std::uint64_t kLayout = 5;
constexpr std::uint64_t kEpisodeNoise = 6;
constexpr std::uint64_t kNetInit = 7;
constexpr std::uint64_t kActionNoise = 8;
constexpr std::uint64_t kReplay = 9;
constexpr std::uint64_t kEpisodeSeeds = 10;
constexpr std::uint64_t kEvalSeeds = 11;
}  // namespace rng_stream

}  // namespace dflow
