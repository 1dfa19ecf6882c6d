#include "dflow/rl/replay.hpp"

#include <algorithm>
#include <cmath>

namespace dflow::rl {

ReplayBuffer::ReplayBuffer(int obs_dim, int action_dim, ReplayConfig cfg)
    : obs_dim_(obs_dim), action_dim_(action_dim), cfg_(cfg) {
    if (obs_dim < 1 || action_dim < 1) throw InvariantViolation("replay dims must be >= 1");
    if (cfg_.capacity < 1 || cfg_.nstep < 1) throw InvariantViolation("replay capacity/nstep must be >= 1");
    if (cfg_.gamma <= 0.0 || cfg_.gamma > 1.0) throw InvariantViolation("replay gamma must be in (0,1]");
}

void ReplayBuffer::begin_episode(const std::vector<float>& obs) {
    if (static_cast<int>(obs.size()) != obs_dim_) throw CountMismatch("observation size mismatch");
    if (!episodes_.empty() && episodes_.back().len == 0) {
        // Restarting an empty episode (e.g. back-to-back resets): replace it.
        episodes_.back().obs.assign(obs.begin(), obs.end());
        return;
    }
    Episode e;
    e.obs.assign(obs.begin(), obs.end());
    base_.push_back(total_);
    episodes_.push_back(std::move(e));
}

void ReplayBuffer::push(const std::vector<float>& action, float reward,
                        const std::vector<float>& next_obs, bool done) {
    if (episodes_.empty()) throw InvariantViolation("push before begin_episode");
    if (static_cast<int>(action.size()) != action_dim_) throw CountMismatch("action size mismatch");
    if (static_cast<int>(next_obs.size()) != obs_dim_) throw CountMismatch("observation size mismatch");
    Episode& e = episodes_.back();
    if (e.done) throw InvariantViolation("push into a finished episode");
    e.actions.insert(e.actions.end(), action.begin(), action.end());
    e.rewards.push_back(reward);
    e.obs.insert(e.obs.end(), next_obs.begin(), next_obs.end());
    e.len += 1;
    e.done = done;
    ++total_;
    evict_if_needed();
}

void ReplayBuffer::evict_if_needed() {
    while (total_ > cfg_.capacity && episodes_.size() > 1) {
        const long long removed = episodes_.front().len;
        episodes_.pop_front();
        base_.erase(base_.begin());
        total_ -= removed;
        for (long long& b : base_) b -= removed;
    }
}

NStepView ReplayBuffer::assemble(int episode, int t) const {
    const Episode& e = episodes_[static_cast<std::size_t>(episode)];
    if (t < 0 || t >= e.len) throw InvariantViolation("n-step start out of range");
    double sum = 0.0;
    double g = 1.0;
    int j = 0;
    for (; j < cfg_.nstep && t + j < e.len; ++j) {
        sum += g * static_cast<double>(e.rewards[static_cast<std::size_t>(t + j)]);
        g *= cfg_.gamma;
    }
    NStepView v;
    v.reward = static_cast<float>(sum);
    v.next_t = t + j;
    // gamma^n' * (1 - done): a chain that reaches the recorded end of a
    // finished episode never bootstraps; chains inside an episode (or at the
    // growing edge of an unfinished one) always do.
    const bool ends_done = (v.next_t == e.len) && e.done;
    v.discount = ends_done ? 0.0f : static_cast<float>(g);
    return v;
}

ReplayBuffer::Batch ReplayBuffer::sample(int batch_size, Rng& rng) const {
    if (batch_size < 1) throw InvariantViolation("batch size must be >= 1");
    if (total_ < batch_size) throw InsufficientData("replay holds " + std::to_string(total_) +
                                                    " transitions; need " + std::to_string(batch_size));
    Batch batch;
    batch.obs.resize(obs_dim_, batch_size);
    batch.actions.resize(action_dim_, batch_size);
    batch.next_obs.resize(obs_dim_, batch_size);
    batch.rewards.resize(batch_size);
    batch.discounts.resize(batch_size);

    for (int i = 0; i < batch_size; ++i) {
        const long long u = static_cast<long long>(rng.uniform_int(static_cast<std::uint64_t>(total_)));
        const auto it = std::upper_bound(base_.begin(), base_.end(), u);
        const int k = static_cast<int>(std::distance(base_.begin(), it)) - 1;
        const Episode& e = episodes_[static_cast<std::size_t>(k)];
        const int t = static_cast<int>(u - base_[static_cast<std::size_t>(k)]);
        const NStepView v = assemble(k, t);

        for (int d = 0; d < obs_dim_; ++d) batch.obs(d, i) = obs_at(e, t)[d];
        for (int d = 0; d < obs_dim_; ++d) batch.next_obs(d, i) = obs_at(e, v.next_t)[d];
        const float* act = e.actions.data() + static_cast<std::size_t>(t) * action_dim_;
        for (int d = 0; d < action_dim_; ++d) batch.actions(d, i) = act[d];
        batch.rewards(i) = v.reward;
        batch.discounts(i) = v.discount;
    }
    return batch;
}

}  // namespace dflow::rl
