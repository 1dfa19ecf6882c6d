#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <deque>
#include <vector>

#include "dflow/error.hpp"
#include "dflow/rng.hpp"

namespace dflow::rl {

struct ReplayConfig {
    int capacity = 100000;  // transitions kept (FIFO by whole episodes)
    int nstep = 3;
    double gamma = 0.99;
};

// One assembled n-step sample (exposed for the brute-force oracle test).
struct NStepView {
    float reward = 0.0f;    // sum_{j<n'} gamma^j r_{t+j}
    float discount = 0.0f;  // gamma^n' * (1 - done at the chain's end)
    int next_t = 0;         // index of the bootstrap observation within the episode
};

// Episode-structured uniform replay with n-step returns assembled at sample
// time. The chain never crosses an episode boundary: it truncates at the
// episode end, where the (1 - done) factor zeroes the bootstrap.
class ReplayBuffer {
public:
    ReplayBuffer(int obs_dim, int action_dim, ReplayConfig cfg);

    void begin_episode(const std::vector<float>& obs);
    void push(const std::vector<float>& action, float reward, const std::vector<float>& next_obs,
              bool done);

    long long size() const { return total_; }  // sampleable transitions
    int obs_dim() const { return obs_dim_; }
    int action_dim() const { return action_dim_; }
    const ReplayConfig& config() const { return cfg_; }

    struct Batch {
        Eigen::MatrixXf obs;       // obs_dim x B
        Eigen::MatrixXf actions;   // action_dim x B
        Eigen::MatrixXf next_obs;  // obs_dim x B
        Eigen::VectorXf rewards;   // B (n-step sums)
        Eigen::VectorXf discounts; // B (gamma^n' * (1 - done))
    };

    // Uniform over stored transitions, with replacement. Throws
    // InsufficientData when fewer than batch_size transitions are stored.
    Batch sample(int batch_size, Rng& rng) const;

    // n-step assembly for episode e, start index t (test hook).
    NStepView assemble(int episode, int t) const;
    int episode_count() const { return static_cast<int>(episodes_.size()); }
    int episode_length(int episode) const { return episodes_[static_cast<std::size_t>(episode)].len; }

private:
    struct Episode {
        std::vector<float> obs;      // (len+1) * obs_dim
        std::vector<float> actions;  // len * action_dim
        std::vector<float> rewards;  // len
        int len = 0;
        bool done = false;
    };

    void evict_if_needed();
    const float* obs_at(const Episode& e, int t) const { return e.obs.data() + static_cast<std::size_t>(t) * obs_dim_; }

    int obs_dim_;
    int action_dim_;
    ReplayConfig cfg_;
    std::deque<Episode> episodes_;
    std::vector<long long> base_;  // transitions stored before episode k
    long long total_ = 0;
};

}  // namespace dflow::rl
