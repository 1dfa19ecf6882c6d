#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dflow/rl/agent.hpp"
#include "dflow/rl/replay.hpp"
#include "dflow/sim/env.hpp"

namespace dflow::rl {

// Linearly annealed exploration stddev, clamped at the final value.
struct LinearSchedule {
    double init = 1.0;
    double final_value = 0.1;
    long long duration = 10000;  // steps to reach final_value

    double at(long long step) const;
    void validate() const;  // throws ConfigError (endpoints ordered, duration >= 1)
};

struct TrainConfig {
    sim::EnvConfig env;
    int hidden = 128;               // desk-scale width (single-core budget)
    long long total_steps = 30000;  // env steps
    long long seed_frames = 4000;   // no updates before this many env steps
    long long expl_steps = 2000;    // uniform random actions before this
    int replay_capacity = 100000;   // desk-scale replay size
    int batch = 256;
    int update_every = 2;           // env steps per gradient update
    int nstep = 3;
    double gamma = 0.99;
    double lr = 1e-4;
    double tau = 0.01;
    double noise_clip = 0.3;
    LinearSchedule stddev{};        // horizon rescaled to the desk-scale budget
    long long eval_every = 2000;
    int eval_episodes = 20;

    void validate() const;  // throws ConfigError
};

struct EvalPoint {
    long long step = 0;
    double success_rate = 0.0;
    double mean_reward = 0.0;  // mean per-episode return over the eval set
};

struct TrainResult {
    std::vector<EvalPoint> curve;  // includes the pre-training point at step 0
    double auc = 0.0;              // mean success rate across eval points
    double final_success = 0.0;
    std::optional<Agent> agent;
};

// Greedy success rate over one episode per seed. Throws ConfigError when the
// seed list is empty.
double evaluate(Agent& agent, sim::Environment& env, const std::vector<std::uint64_t>& seeds);

// Convenience wrapper: `episodes` fresh seeds from the evaluation stream of
// `seed`. Throws ConfigError when episodes < 1.
double evaluate(Agent& agent, const sim::EnvConfig& cfg, int episodes, std::uint64_t seed);

using EvalCallback = std::function<void(const EvalPoint&)>;

// Full deterministic training run: seed phase (random actions, no updates),
// exploration phase (random actions), then noisy policy actions with one
// update every `update_every` steps, evaluating 20 greedy episodes on a fixed
// seed set at every eval point. Identical (config, seed) pairs produce
// identical curves.
TrainResult train(const TrainConfig& cfg, std::uint64_t seed, const EvalCallback& on_eval = {});

}  // namespace dflow::rl
