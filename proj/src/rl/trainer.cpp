#include "dflow/rl/trainer.hpp"

#include <algorithm>

namespace dflow::rl {

namespace {

sim::Action to_action(const std::vector<float>& a) {
    return sim::Action{static_cast<double>(a[0]), static_cast<double>(a[1]),
                       static_cast<double>(a[2]), static_cast<double>(a[3])};
}

}  // namespace

double LinearSchedule::at(long long step) const {
    if (step >= duration) return final_value;
    const double frac = static_cast<double>(step) / static_cast<double>(duration);
    return init + (final_value - init) * frac;
}

void LinearSchedule::validate() const {
    if (duration < 1) throw ConfigError("stddev schedule duration must be >= 1");
    if (final_value < 0.0 || init < final_value) {
        throw ConfigError("stddev schedule endpoints must satisfy init >= final >= 0");
    }
}

void TrainConfig::validate() const {
    if (total_steps < 1) throw ConfigError("total_steps must be >= 1");
    if (seed_frames < 0 || expl_steps < 0) throw ConfigError("seed/exploration steps must be >= 0");
    if (replay_capacity < batch) throw ConfigError("replay capacity must hold at least one batch");
    if (batch < 1) throw ConfigError("batch must be >= 1");
    if (update_every < 1) throw ConfigError("update_every must be >= 1");
    if (nstep < 1) throw ConfigError("nstep must be >= 1");
    if (gamma <= 0.0 || gamma > 1.0) throw ConfigError("gamma must be in (0,1]");
    if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
    if (!(tau > 0.0) || tau > 1.0) throw ConfigError("tau must be in (0,1]");
    if (noise_clip < 0.0) throw ConfigError("noise_clip must be >= 0");
    if (hidden < 1) throw ConfigError("hidden width must be >= 1");
    if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
    if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
    stddev.validate();
}

double evaluate(Agent& agent, sim::Environment& env, const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw ConfigError("evaluation needs at least one episode");
    int successes = 0;
    Rng unused(0);
    for (const std::uint64_t s : seeds) {
        std::vector<float> obs = env.reset(s);
        while (!env.done()) {
            obs = env.step(to_action(agent.act(obs, 0.0, unused))).observation;
        }
        if (env.world().state.succeeded) ++successes;
    }
    return static_cast<double>(successes) / static_cast<double>(seeds.size());
}

double evaluate(Agent& agent, const sim::EnvConfig& cfg, int episodes, std::uint64_t seed) {
    if (episodes < 1) throw ConfigError("evaluation needs at least one episode");
    sim::Environment env(cfg);
    Rng eval_rng(seed, rng_stream::kEvalSeeds);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(episodes));
    for (auto& s : seeds) s = eval_rng.next_u64();
    return evaluate(agent, env, seeds);
}

TrainResult train(const TrainConfig& cfg, std::uint64_t seed, const EvalCallback& on_eval) {
    cfg.validate();
    sim::Environment env(cfg.env);
    sim::Environment eval_env(cfg.env);

    AgentConfig acfg;
    acfg.obs_dim = env.observation_size();
    acfg.action_dim = sim::Environment::kActionSize;
    acfg.hidden = cfg.hidden;
    acfg.lr = cfg.lr;
    acfg.tau = cfg.tau;
    acfg.noise_clip = cfg.noise_clip;
    Agent agent(acfg, seed);

    ReplayBuffer replay(acfg.obs_dim, acfg.action_dim,
                        ReplayConfig{cfg.replay_capacity, cfg.nstep, cfg.gamma});

    Rng episode_rng(seed, rng_stream::kEpisodeSeeds);
    Rng action_rng(seed, rng_stream::kActionNoise);
    Rng replay_rng(seed, rng_stream::kReplay);
    Rng eval_rng(seed, rng_stream::kEvalSeeds);
    std::vector<std::uint64_t> eval_seeds(static_cast<std::size_t>(cfg.eval_episodes));
    for (auto& s : eval_seeds) s = eval_rng.next_u64();

    TrainResult result;
    const auto run_eval = [&](long long step) {
        EvalPoint p;
        p.step = step;
        int successes = 0;
        double return_sum = 0.0;
        Rng unused(0);
        for (const std::uint64_t s : eval_seeds) {
            std::vector<float> obs = eval_env.reset(s);
            double ep_return = 0.0;
            while (!eval_env.done()) {
                const sim::StepResult r = eval_env.step(to_action(agent.act(obs, 0.0, unused)));
                ep_return += r.reward;
                obs = r.observation;
            }
            if (eval_env.world().state.succeeded) ++successes;
            return_sum += ep_return;
        }
        p.success_rate = static_cast<double>(successes) / static_cast<double>(eval_seeds.size());
        p.mean_reward = return_sum / static_cast<double>(eval_seeds.size());
        result.curve.push_back(p);
        if (on_eval) on_eval(p);
    };

    std::vector<float> obs = env.reset(episode_rng.next_u64());
    replay.begin_episode(obs);
    run_eval(0);

    for (long long step = 1; step <= cfg.total_steps; ++step) {
        const double stddev = cfg.stddev.at(step);
        std::vector<float> action;
        if (step <= cfg.expl_steps) {
            action = {static_cast<float>(action_rng.uniform(-1.0, 1.0)),
                      static_cast<float>(action_rng.uniform(-1.0, 1.0)),
                      static_cast<float>(action_rng.uniform(-1.0, 1.0)),
                      static_cast<float>(action_rng.uniform(-1.0, 1.0))};
        } else {
            action = agent.act(obs, stddev, action_rng);
        }
        const sim::StepResult res = env.step(to_action(action));
        replay.push(action, static_cast<float>(res.reward), res.observation, res.done);
        obs = res.observation;
        if (res.done) {
            obs = env.reset(episode_rng.next_u64());
            replay.begin_episode(obs);
        }
        if (step > cfg.seed_frames && step % cfg.update_every == 0 &&
            replay.size() >= cfg.batch) {
            agent.update(replay.sample(cfg.batch, replay_rng), stddev, action_rng);
        }
        if (step % cfg.eval_every == 0) run_eval(step);
    }

    double auc = 0.0;
    for (const EvalPoint& p : result.curve) auc += p.success_rate;
    result.auc = auc / static_cast<double>(result.curve.size());
    result.final_success = result.curve.back().success_rate;
    result.agent = std::move(agent);
    return result;
}

}  // namespace dflow::rl
