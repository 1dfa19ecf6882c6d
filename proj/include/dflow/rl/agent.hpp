#pragma once

#include <cstdint>
#include <vector>

#include "dflow/rl/net.hpp"
#include "dflow/rl/replay.hpp"
#include "dflow/rng.hpp"

namespace dflow::rl {

struct AgentConfig {
    int obs_dim = 0;
    int action_dim = 4;
    int hidden = 128;        // two hidden layers of this width
    double lr = 1e-4;        // Adam learning rate, all networks
    double tau = 0.01;       // target soft-update rate
    double noise_clip = 0.3; // per-component exploration/target noise clip

    void validate() const;  // throws ConfigError
};

// Deterministic actor-critic with twin critics, twin soft-updated target
// critics, n-step TD targets, and clipped Gaussian exploration — the
// low-dimensional-observation variant of the usual image-based recipe (the
// random-shift augmentation is inapplicable here and dropped).
class Agent {
public:
    Agent() = default;  // empty; assign from a real instance before use
    Agent(AgentConfig cfg, std::uint64_t seed);

    const AgentConfig& config() const { return cfg_; }

    // One pre-clip exploration noise draw (exposed so tests can Monte-Carlo
    // the scheduled stddev).
    static double sample_noise(Rng& rng, double stddev) { return rng.normal() * stddev; }

    // tanh(actor(obs)) plus per-component clip(noise, +-noise_clip), clamped
    // to [-1,1]. stddev = 0 is pure greedy and draws nothing.
    std::vector<float> act(const std::vector<float>& obs, double stddev, Rng& rng);

    struct UpdateStats {
        double critic_loss = 0.0;  // sum of both critics' MSE
        double actor_loss = 0.0;   // -mean(min of twins) at the actor's action
        double mean_q = 0.0;
        double mean_target = 0.0;
    };

    // One twin-critic TD step toward the n-step target (min of twin targets),
    // one deterministic-policy-gradient actor step, then target soft updates.
    UpdateStats update(const ReplayBuffer::Batch& batch, double stddev, Rng& rng);

    // Open for tests and checkpointing.
    Net<float> actor, critic1, critic2, target1, target2;

private:
    AgentConfig cfg_;
};

}  // namespace dflow::rl
