#include "dflow/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "dflow/rl/checkpoint.hpp"
#include "dflow/sim/env.hpp"
#include "dflow/sim/expert.hpp"

namespace dflow::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

// Provenance-stamped CSV: one comment line with the config hash, one header
// row, then data rows. '\n' endings and shortest-round-trip numbers keep
// reruns byte-identical.
class CsvFile {
public:
    CsvFile(const std::string& path, const std::string& hash, const std::string& header)
        : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw ParseError("cannot open for writing: " + path);
        out_ << "# config-hash: " << hash << "\n" << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }
    void close() {
        out_.close();
        if (!out_.good()) throw ParseError("write failed: " + path_);
    }

private:
    std::string path_;
    std::ofstream out_;
};

// Run jobs on a bounded pool; each job owns its data exclusively. The first
// exception (in job order) is rethrown after all workers finish.
void run_pool(const std::vector<std::function<void()>>& jobs) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>({hw, jobs.size(), 8});
    std::vector<std::exception_ptr> errors(jobs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            try {
                jobs[i]();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
                try {
                    jobs[i]();
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    double sum = 0.0;
    for (const double x : xs) sum += x;
    out.mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (const double x : xs) sq += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(sq / static_cast<double>(xs.size()));
    return out;
}

std::string curve_file_name(const std::string& prefix, std::uint64_t seed) {
    return prefix + "seed" + std::to_string(seed) + ".csv";
}

// Train each seed and write its curve CSV + checkpoint; shared by cmd_train
// and the training ablation axes.
std::vector<rl::TrainResult> train_seeds(const rl::TrainConfig& tcfg,
                                         const std::vector<std::uint64_t>& seeds,
                                         const std::string& out_dir, const std::string& prefix,
                                         const std::string& hash,
                                         std::vector<std::string>& curve_files,
                                         std::vector<std::string>* checkpoint_files) {
    std::vector<rl::TrainResult> results(seeds.size());
    std::vector<std::function<void()>> jobs;
    jobs.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const std::uint64_t seed = seeds[i];
        const std::string curve_path = (fs::path(out_dir) / curve_file_name("curve_" + prefix, seed)).string();
        const std::string ckpt_path =
            (fs::path(out_dir) / ("checkpoint_" + prefix + "seed" + std::to_string(seed) + ".json")).string();
        curve_files.push_back(curve_path);
        if (checkpoint_files) checkpoint_files->push_back(ckpt_path);
        const bool want_ckpt = checkpoint_files != nullptr;
        jobs.emplace_back([&results, i, seed, curve_path, ckpt_path, want_ckpt, &tcfg, &hash] {
            rl::TrainResult r = rl::train(tcfg, seed);
            CsvFile csv(curve_path, hash, "step,seed,success_rate,mean_reward");
            for (const rl::EvalPoint& p : r.curve) {
                csv.row({std::to_string(p.step), std::to_string(seed), format_number(p.success_rate),
                         format_number(p.mean_reward)});
            }
            csv.close();
            if (want_ckpt) rl::save_checkpoint(*r.agent, ckpt_path);
            results[i] = std::move(r);
        });
    }
    run_pool(jobs);
    return results;
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

TrainArtifacts cmd_train(const ExperimentConfig& cfg) {
    cfg.validate();
    const rl::TrainConfig tcfg = cfg.train_config();
    fs::create_directories(cfg.out_dir);
    const std::string hash = cfg.hash();

    TrainArtifacts art;
    art.results = train_seeds(tcfg, cfg.seeds, cfg.out_dir, "", hash, art.curve_files,
                              &art.checkpoint_files);

    art.summary_file = (fs::path(cfg.out_dir) / "summary.csv").string();
    CsvFile summary(art.summary_file, hash,
                    "step,mean_success,std_success,mean_reward,std_reward");
    const std::size_t points = art.results.front().curve.size();
    for (std::size_t p = 0; p < points; ++p) {
        std::vector<double> succ, rew;
        for (const rl::TrainResult& r : art.results) {
            succ.push_back(r.curve[p].success_rate);
            rew.push_back(r.curve[p].mean_reward);
        }
        const MeanStd s = mean_std(succ);
        const MeanStd r = mean_std(rew);
        summary.row({std::to_string(art.results.front().curve[p].step), format_number(s.mean),
                     format_number(s.std), format_number(r.mean), format_number(r.std)});
    }
    summary.close();
    return art;
}

double cmd_evaluate(const ExperimentConfig& cfg, const std::string& checkpoint_path,
                    int episodes, std::uint64_t seed, const std::string& out_csv) {
    cfg.validate();
    if (episodes < 1) throw ConfigError("evaluate: field 'episodes': must be >= 1");
    const std::string ckpt_text = read_file(checkpoint_path);
    rl::Agent agent = rl::checkpoint_from_json(ckpt_text, checkpoint_path);
    sim::Environment env(cfg.env_config());
    if (agent.config().obs_dim != env.observation_size()) {
        throw ConfigError("evaluate: checkpoint expects observation width " +
                          std::to_string(agent.config().obs_dim) + " but the configured task provides " +
                          std::to_string(env.observation_size()));
    }
    const std::string hash = hash_hex(cfg.canonical_json() + "|" + hash_hex(ckpt_text) + "|" +
                                      std::to_string(episodes) + "|" + std::to_string(seed));

    fs::create_directories(fs::path(out_csv).parent_path().empty()
                               ? fs::path(".")
                               : fs::path(out_csv).parent_path());
    CsvFile csv(out_csv, hash, "episode,seed,success,episode_return");
    Rng seed_rng(seed, rng_stream::kEvalSeeds);
    Rng noise_rng(seed, rng_stream::kActionNoise);  // unused at stddev 0; kept for signature
    int successes = 0;
    for (int ep = 0; ep < episodes; ++ep) {
        const std::uint64_t ep_seed = seed_rng.next_u64();
        std::vector<float> obs = env.reset(ep_seed);
        double ret = 0.0;
        while (!env.done()) {
            const auto a = agent.act(obs, 0.0, noise_rng);
            const sim::StepResult sr = env.step(sim::Action{a[0], a[1], a[2], a[3]});
            obs = sr.observation;
            ret += sr.reward;
        }
        const bool success = env.world().state.succeeded;
        successes += success ? 1 : 0;
        csv.row({std::to_string(ep), std::to_string(ep_seed), success ? "1" : "0",
                 format_number(ret)});
    }
    csv.close();
    return static_cast<double>(successes) / static_cast<double>(episodes);
}

ScoreResult score_flows(const KeypointFlow& a, const KeypointFlow& b, RewardScale base) {
    const DeltaFlow da = delta_flow(a);
    const DeltaFlow db = delta_flow(b);
    const RewardScale scale = calibrate_rotation_scale(base, b);
    const int len_a = a.frames;
    const int len_b = b.frames;
    ScoreResult out;
    out.per_step.reserve(static_cast<std::size_t>(len_a));
    for (int i = 0; i < len_a; ++i) {
        const int j = align_flow_index(i, len_a, len_b);
        const double r = flow_match_reward(da.step(i), db.step(j), scale);
        out.per_step.push_back(r);
        out.aligned.push_back(j);
        out.total += r;
    }
    out.mean = out.total / static_cast<double>(len_a);
    return out;
}

ScoreResult cmd_score(const std::string& flow_a_path, const std::string& flow_b_path,
                      RewardScale base, const std::string& out_csv) {
    const std::string text_a = read_file(flow_a_path);
    const std::string text_b = read_file(flow_b_path);
    const FlowFile fa = flow_file_from_json(text_a, flow_a_path);
    const FlowFile fb = flow_file_from_json(text_b, flow_b_path);
    const ScoreResult result = score_flows(fa.flow, fb.flow, base);

    const std::string hash = hash_hex(hash_hex(text_a) + "|" + hash_hex(text_b) + "|" +
                                      format_number(base.c_tr) + "|" + format_number(base.c_rot));
    CsvFile csv(out_csv, hash, "step,ref_step,reward,cumulative");
    double cumulative = 0.0;
    for (std::size_t i = 0; i < result.per_step.size(); ++i) {
        cumulative += result.per_step[i];
        csv.row({std::to_string(i), std::to_string(result.aligned[i]),
                 format_number(result.per_step[i]), format_number(cumulative)});
    }
    csv.close();
    return result;
}

AblateArtifacts cmd_ablate(const ExperimentConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    const std::string hash = cfg.hash();
    AblateArtifacts art;

    if (cfg.ablate.axis == "noise") {
        // Monte-Carlo replay study: the clean expert flow scored against its
        // own noised copy, per preset. Rows are ordered by increasing noise
        // under the componentwise (gauss, drift) partial order; mean rewards
        // are monotone nonincreasing along every comparable chain.
        static const std::vector<std::string> presets = {
            "none", "gauss1-drift0", "gauss2-drift1", "gauss2-drift2", "gauss4-drift0"};
        const int episodes = cfg.ablate.episodes;
        Rng seed_rng(cfg.seeds.front(), rng_stream::kEvalSeeds);
        std::vector<std::uint64_t> ep_seeds;
        ep_seeds.reserve(static_cast<std::size_t>(episodes));
        for (int e = 0; e < episodes; ++e) ep_seeds.push_back(seed_rng.next_u64());

        std::vector<std::vector<double>> means(presets.size());
        for (int e = 0; e < episodes; ++e) {
            const sim::ExpertTrace trace = sim::record_expert(cfg.task, ep_seeds[static_cast<std::size_t>(e)],
                                                              cfg.keypoints);
            for (std::size_t p = 0; p < presets.size(); ++p) {
                const NoisePreset preset = preset_from_name(presets[p]);
                const KeypointFlow noised =
                    perturb_flow(trace.flow.flow, preset, ep_seeds[static_cast<std::size_t>(e)]);
                means[p].push_back(score_flows(trace.flow.flow, noised, RewardScale{}).mean);
            }
        }

        art.table_file = (fs::path(cfg.out_dir) / "noise_ablation.csv").string();
        CsvFile csv(art.table_file, hash,
                    "preset,gauss,drift,episodes,mean_step_reward,std_step_reward");
        for (std::size_t p = 0; p < presets.size(); ++p) {
            const NoisePreset preset = preset_from_name(presets[p]);
            const MeanStd ms = mean_std(means[p]);
            csv.row({presets[p], format_number(preset.gauss_scale), format_number(preset.drift_scale),
                     std::to_string(episodes), format_number(ms.mean), format_number(ms.std)});
            art.labels.push_back(presets[p]);
        }
        csv.close();
        return art;
    }

    // Training axes: each entry retrained under the identical seed list.
    struct Entry {
        std::string label;
        rl::TrainConfig tcfg;
    };
    std::vector<Entry> entries;
    if (cfg.ablate.axis == "variant") {
        if (cfg.ablate.variants.size() < 2) {
            throw ConfigError("config: field 'ablate.variants': need at least 2 entries");
        }
        for (const std::string& name : cfg.ablate.variants) {
            ExperimentConfig variant_cfg = cfg;
            variant_cfg.variant = reward_variant_from_name(name);
            entries.push_back({name, variant_cfg.train_config()});
        }
    } else {  // keypoints
        if (cfg.ablate.keypoint_counts.size() < 2) {
            throw ConfigError("config: field 'ablate.keypoints': need at least 2 entries");
        }
        for (const int k : cfg.ablate.keypoint_counts) {
            ExperimentConfig k_cfg = cfg;
            k_cfg.keypoints = k;
            k_cfg.validate();
            entries.push_back({"k" + std::to_string(k), k_cfg.train_config()});
        }
    }

    std::vector<std::vector<rl::TrainResult>> all_results;
    all_results.reserve(entries.size());
    for (const Entry& entry : entries) {
        all_results.push_back(train_seeds(entry.tcfg, cfg.seeds, cfg.out_dir, entry.label + "_",
                                          hash, art.curve_files, nullptr));
        art.labels.push_back(entry.label);
    }

    art.table_file = (fs::path(cfg.out_dir) / "ablation.csv").string();
    CsvFile csv(art.table_file, hash, "step,label,mean_success,std_success");
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const auto& results = all_results[e];
        const std::size_t points = results.front().curve.size();
        for (std::size_t p = 0; p < points; ++p) {
            std::vector<double> succ;
            for (const rl::TrainResult& r : results) succ.push_back(r.curve[p].success_rate);
            const MeanStd ms = mean_std(succ);
            csv.row({std::to_string(results.front().curve[p].step), entries[e].label,
                     format_number(ms.mean), format_number(ms.std)});
        }
    }
    csv.close();
    return art;
}

std::string cmd_record_expert(sim::TaskId task, std::uint64_t seed, int keypoints,
                              const std::string& out_path) {
    const sim::ExpertTrace trace = sim::record_expert(task, seed, keypoints);
    const fs::path parent = fs::path(out_path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    save_flow_file(trace.flow, out_path);
    return out_path;
}

std::string cmd_perturb(const std::string& in_path, const std::string& preset_name,
                        std::uint64_t seed, const std::string& out_path) {
    FlowFile file = load_flow_file(in_path);
    const NoisePreset preset = preset_from_name(preset_name);
    file.flow = perturb_flow(file.flow, preset, seed);
    const fs::path parent = fs::path(out_path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    save_flow_file(file, out_path);
    return out_path;
}

}  // namespace dflow::cli
