// Command-line front end: config-driven training, evaluation, flow scoring,
// ablation sweeps, expert recording, and flow perturbation. Exit code 0 on
// success; otherwise one machine-readable line on stderr:
//   error: <Kind>: <message>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dflow/cli/commands.hpp"

namespace {

using namespace dflow;

int fail_line(const char* kind, const std::string& message) {
    std::fprintf(stderr, "error: %s: %s\n", kind, message.c_str());
    return 1;
}

cli::ExperimentConfig load_config(const std::string& config_path,
                                  const std::optional<std::uint64_t>& seed,
                                  const std::optional<std::string>& out_dir) {
    cli::ExperimentConfig cfg = cli::config_from_file(config_path);
    cli::ConfigOverrides ov;
    ov.seed = seed;
    ov.out_dir = out_dir;
    cli::apply_overrides(cfg, ov);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"delta-flow tracking reward experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir, checkpoint_path, flow_a, flow_b, in_path, out_path;
    std::string task_name = "pick-place", preset_name = "none";
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::string> out_flag;
    int episodes = 20, keypoints = kDefaultKeypointCount;
    std::uint64_t seed_value = 1;
    double c_tr = RewardScale{}.c_tr;

    auto* train = app.add_subcommand("train", "train one agent per seed and write curves");
    train->add_option("--config", config_path, "experiment config JSON")->required();
    train->add_option("--seed", seed_flag, "override: train this single seed");
    train->add_option("--out", out_flag, "override: output directory");

    auto* evaluate = app.add_subcommand("evaluate", "greedy evaluation of a checkpoint");
    evaluate->add_option("--config", config_path, "experiment config JSON")->required();
    evaluate->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")->required();
    evaluate->add_option("--episodes", episodes, "evaluation episodes (default 20)");
    evaluate->add_option("--seed", seed_value, "evaluation seed (default 1)");
    evaluate->add_option("--out", out_path, "per-episode CSV path (default <out>/eval.csv)");

    auto* score = app.add_subcommand("score", "score flow A against reference flow B");
    score->add_option("flow_a", flow_a, "flow JSON to score")->required();
    score->add_option("flow_b", flow_b, "reference flow JSON")->required();
    score->add_option("--c-tr", c_tr, "translation mismatch scale, px^2");
    score->add_option("--out", out_path, "per-step CSV path (default score.csv)");

    auto* ablate = app.add_subcommand("ablate", "run the configured ablation sweep");
    ablate->add_option("--config", config_path, "experiment config JSON")->required();
    ablate->add_option("--seed", seed_flag, "override: run this single seed");
    ablate->add_option("--out", out_flag, "override: output directory");

    auto* record = app.add_subcommand("record-expert", "record a scripted-expert flow");
    record->add_option("--task", task_name, "task name (default pick-place)");
    record->add_option("--seed", seed_value, "layout seed (default 1)");
    record->add_option("--keypoints", keypoints, "contour keypoint count (default 128)");
    record->add_option("--out", out_path, "flow JSON path (default expert.json)");

    auto* perturb = app.add_subcommand("perturb", "apply a noise preset to a flow file");
    perturb->add_option("--in", in_path, "input flow JSON")->required();
    perturb->add_option("--preset", preset_name, "noise preset name")->required();
    perturb->add_option("--seed", seed_value, "noise seed (default 1)");
    perturb->add_option("--out", out_path, "output flow JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: UsageError: %s\n", e.what());
        return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
    }

    try {
        if (train->parsed()) {
            const cli::ExperimentConfig cfg = load_config(config_path, seed_flag, out_flag);
            const cli::TrainArtifacts art = cli::cmd_train(cfg);
            for (std::size_t i = 0; i < art.results.size(); ++i) {
                std::printf("seed %llu: final_success %s auc %s\n",
                            static_cast<unsigned long long>(cfg.seeds[i]),
                            cli::format_number(art.results[i].final_success).c_str(),
                            cli::format_number(art.results[i].auc).c_str());
            }
            std::printf("wrote %zu curve files + %s\n", art.curve_files.size(),
                        art.summary_file.c_str());
        } else if (evaluate->parsed()) {
            const cli::ExperimentConfig cfg = load_config(config_path, std::nullopt, std::nullopt);
            if (out_path.empty()) out_path = cfg.out_dir + "/eval.csv";
            const double rate = cli::cmd_evaluate(cfg, checkpoint_path, episodes, seed_value, out_path);
            std::printf("success_rate %s over %d episodes\n", cli::format_number(rate).c_str(),
                        episodes);
        } else if (score->parsed()) {
            if (out_path.empty()) out_path = "score.csv";
            RewardScale base;
            base.c_tr = c_tr;
            const cli::ScoreResult result = cli::cmd_score(flow_a, flow_b, base, out_path);
            std::printf("mean_step_reward %s cumulative %s steps %zu\n",
                        cli::format_number(result.mean).c_str(),
                        cli::format_number(result.total).c_str(), result.per_step.size());
        } else if (ablate->parsed()) {
            const cli::ExperimentConfig cfg = load_config(config_path, seed_flag, out_flag);
            const cli::AblateArtifacts art = cli::cmd_ablate(cfg);
            std::printf("wrote %s (%zu curve files)\n", art.table_file.c_str(),
                        art.curve_files.size());
        } else if (record->parsed()) {
            if (out_path.empty()) out_path = "expert.json";
            const sim::TaskId task = sim::task_from_name(task_name);
            cli::cmd_record_expert(task, seed_value, keypoints, out_path);
            std::printf("wrote %s\n", out_path.c_str());
        } else if (perturb->parsed()) {
            cli::cmd_perturb(in_path, preset_name, seed_value, out_path);
            std::printf("wrote %s\n", out_path.c_str());
        }
    } catch (const ConfigError& e) {
        return fail_line("ConfigError", e.what());
    } catch (const ParseError& e) {
        return fail_line("ParseError", e.what());
    } catch (const SchemaMismatch& e) {
        return fail_line("SchemaMismatch", e.what());
    } catch (const InvariantViolation& e) {
        return fail_line("InvariantViolation", e.what());
    } catch (const ScriptFailure& e) {
        return fail_line("ScriptFailure", e.what());
    } catch (const UnknownTask& e) {
        return fail_line("UnknownTask", e.what());
    } catch (const Error& e) {
        return fail_line("Error", e.what());
    } catch (const std::exception& e) {
        return fail_line("InternalError", e.what());
    }
    return 0;
}
