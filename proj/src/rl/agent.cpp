#include "dflow/rl/agent.hpp"

#include <algorithm>
#include <cmath>

namespace dflow::rl {

namespace {

float clampf(float v, float lo, float hi) { return std::min(hi, std::max(lo, v)); }

}  // namespace

void AgentConfig::validate() const {
    if (obs_dim < 1) throw ConfigError("agent obs_dim must be >= 1");
    if (action_dim < 1) throw ConfigError("agent action_dim must be >= 1");
    if (hidden < 1) throw ConfigError("agent hidden width must be >= 1");
    if (!(lr > 0.0)) throw ConfigError("agent lr must be > 0");
    if (!(tau > 0.0) || tau > 1.0) throw ConfigError("agent tau must be in (0,1]");
    if (noise_clip < 0.0) throw ConfigError("agent noise_clip must be >= 0");
}

Agent::Agent(AgentConfig cfg, std::uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(seed, rng_stream::kNetInit);
    actor = Net<float>({cfg_.obs_dim, cfg_.hidden, cfg_.hidden, cfg_.action_dim}, rng);
    critic1 = Net<float>({cfg_.obs_dim + cfg_.action_dim, cfg_.hidden, cfg_.hidden, 1}, rng);
    critic2 = Net<float>({cfg_.obs_dim + cfg_.action_dim, cfg_.hidden, cfg_.hidden, 1}, rng);
    target1 = critic1;
    target2 = critic2;
}

std::vector<float> Agent::act(const std::vector<float>& obs, double stddev, Rng& rng) {
    if (static_cast<int>(obs.size()) != cfg_.obs_dim) throw CountMismatch("observation size mismatch");
    Eigen::MatrixXf x(cfg_.obs_dim, 1);
    for (int d = 0; d < cfg_.obs_dim; ++d) x(d, 0) = obs[static_cast<std::size_t>(d)];
    const Eigen::MatrixXf y = actor.forward(x).array().tanh().matrix();
    std::vector<float> a(static_cast<std::size_t>(cfg_.action_dim));
    const float clip = static_cast<float>(cfg_.noise_clip);
    for (int d = 0; d < cfg_.action_dim; ++d) {
        float v = y(d, 0);
        if (stddev > 0.0) {
            const float noise = clampf(static_cast<float>(sample_noise(rng, stddev)), -clip, clip);
            v += noise;
        }
        a[static_cast<std::size_t>(d)] = clampf(v, -1.0f, 1.0f);
    }
    return a;
}

Agent::UpdateStats Agent::update(const ReplayBuffer::Batch& batch, double stddev, Rng& rng) {
    const int cols = static_cast<int>(batch.obs.cols());
    const int act_dim = cfg_.action_dim;
    const float inv_b = 1.0f / static_cast<float>(cols);
    const float clip = static_cast<float>(cfg_.noise_clip);

    // Target action: online actor at the bootstrap state plus clipped noise.
    Eigen::MatrixXf a_next = actor.forward(batch.next_obs).array().tanh().matrix();
    for (int i = 0; i < cols; ++i) {
        for (int d = 0; d < act_dim; ++d) {
            const float noise = clampf(static_cast<float>(sample_noise(rng, stddev)), -clip, clip);
            a_next(d, i) = clampf(a_next(d, i) + noise, -1.0f, 1.0f);
        }
    }

    Eigen::MatrixXf in_next(batch.obs.rows() + act_dim, cols);
    in_next.topRows(batch.obs.rows()) = batch.next_obs;
    in_next.bottomRows(act_dim) = a_next;
    const Eigen::RowVectorXf q1n = target1.forward(in_next).row(0);
    const Eigen::RowVectorXf q2n = target2.forward(in_next).row(0);
    const Eigen::RowVectorXf y = batch.rewards.transpose().array() +
                                 batch.discounts.transpose().array() *
                                     q1n.array().min(q2n.array());

    // Twin-critic TD step.
    Eigen::MatrixXf in_cur(batch.obs.rows() + act_dim, cols);
    in_cur.topRows(batch.obs.rows()) = batch.obs;
    in_cur.bottomRows(act_dim) = batch.actions;

    UpdateStats stats;
    const Eigen::RowVectorXf q1 = critic1.forward(in_cur).row(0);
    Eigen::MatrixXf d1 = (2.0f * inv_b) * (q1 - y);
    critic1.zero_grad();
    critic1.backward(d1);
    critic1.adam_step(static_cast<float>(cfg_.lr));

    const Eigen::RowVectorXf q2 = critic2.forward(in_cur).row(0);
    Eigen::MatrixXf d2 = (2.0f * inv_b) * (q2 - y);
    critic2.zero_grad();
    critic2.backward(d2);
    critic2.adam_step(static_cast<float>(cfg_.lr));

    stats.critic_loss = ((q1 - y).squaredNorm() + (q2 - y).squaredNorm()) * inv_b;
    stats.mean_q = q1.mean();
    stats.mean_target = y.mean();

    // Deterministic policy gradient through the pessimistic twin.
    const Eigen::MatrixXf a_pi = actor.forward(batch.obs).array().tanh().matrix();
    Eigen::MatrixXf in_pi(batch.obs.rows() + act_dim, cols);
    in_pi.topRows(batch.obs.rows()) = batch.obs;
    in_pi.bottomRows(act_dim) = a_pi;
    const Eigen::RowVectorXf qa1 = critic1.forward(in_pi).row(0);
    const Eigen::RowVectorXf qa2 = critic2.forward(in_pi).row(0);

    Eigen::MatrixXf dq1(1, cols);
    Eigen::MatrixXf dq2(1, cols);
    for (int i = 0; i < cols; ++i) {
        const bool first = qa1(i) <= qa2(i);
        dq1(0, i) = first ? -inv_b : 0.0f;
        dq2(0, i) = first ? 0.0f : -inv_b;
    }
    critic1.zero_grad();
    const Eigen::MatrixXf gin1 = critic1.backward(dq1);
    critic2.zero_grad();
    const Eigen::MatrixXf gin2 = critic2.backward(dq2);
    // Only the action rows flow back into the actor; critic parameters keep
    // their (discarded) gradients and are not stepped here.
    Eigen::MatrixXf d_action = gin1.bottomRows(act_dim) + gin2.bottomRows(act_dim);
    Eigen::MatrixXf d_pre = d_action.cwiseProduct(
        (Eigen::MatrixXf::Ones(act_dim, cols) - a_pi.cwiseProduct(a_pi)));
    actor.zero_grad();
    actor.backward(d_pre);
    actor.adam_step(static_cast<float>(cfg_.lr));

    stats.actor_loss = -qa1.cwiseMin(qa2).mean();

    target1.soft_update_from(critic1, static_cast<float>(cfg_.tau));
    target2.soft_update_from(critic2, static_cast<float>(cfg_.tau));
    return stats;
}

}  // namespace dflow::rl
