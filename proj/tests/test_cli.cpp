// Config parsing, experiment commands, and the CSV artifact contract:
// strict field-naming diagnostics, file-count guarantees, recomputable
// summaries, provenance hashes, and byte-identical reruns.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dflow/cli/commands.hpp"
#include "dflow/cli/config.hpp"
#include "dflow/error.hpp"
#include "dflow/flow_io.hpp"
#include "dflow/noise.hpp"
#include "dflow/sim/expert.hpp"
#include "doctest.h"

using namespace dflow;
using namespace dflow::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::string line;
    std::istringstream ss(text);
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

struct Csv {
    std::string hash;  // 16 hex digits from the provenance comment
    std::string header;
    std::vector<std::vector<std::string>> rows;
};

Csv parse_csv(const std::string& text) {
    const auto lines = split_lines(text);
    REQUIRE(lines.size() >= 2);
    const std::string prefix = "# config-hash: ";
    REQUIRE(lines[0].substr(0, prefix.size()) == prefix);
    Csv csv;
    csv.hash = lines[0].substr(prefix.size());
    CHECK(csv.hash.size() == 16);
    for (char c : csv.hash) CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
    csv.header = lines[1];
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (!lines[i].empty()) csv.rows.push_back(split_commas(lines[i]));
    }
    return csv;
}

double to_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    REQUIRE(end == s.c_str() + s.size());
    return v;
}

std::string fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("dflow_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

// Small, fast training budget shared by the artifact-contract tests.
std::string tiny_train_json(const std::string& out_dir, const std::string& seeds = "[11, 12, 13]") {
    return std::string(R"({
  "task": "pick-place",
  "keypoints": 16,
  "lookahead": 2,
  "seeds": )") + seeds + R"(,
  "out": ")" + out_dir + R"(",
  "train": {
    "hidden": 16,
    "total_steps": 600,
    "seed_frames": 150,
    "expl_steps": 100,
    "batch": 32,
    "eval_every": 300,
    "eval_episodes": 2,
    "stddev": {"init": 1.0, "final": 0.1, "duration": 500}
  }
})";
}

void expect_config_error(const std::string& json, const std::string& needle) {
    try {
        (void)config_from_json(json);
        FAIL_CHECK("expected ConfigError for: " << json);
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK_MESSAGE(what.find(needle) != std::string::npos,
                      "message '" << what << "' should mention '" << needle << "'");
    }
}

}  // namespace

TEST_CASE("config: a minimal file parses with documented defaults") {
    const ExperimentConfig cfg = config_from_json(R"({"task": "pour"})");
    CHECK(cfg.task == sim::TaskId::Pour);
    CHECK(cfg.variant == RewardVariant::DeltaFlow);
    CHECK(cfg.noise_name == "none");
    CHECK(cfg.keypoints == kDefaultKeypointCount);
    CHECK(cfg.lookahead == 8);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.train.hidden == 128);
    cfg.validate();  // defaults are self-consistent

    const sim::EnvConfig env = cfg.env_config();
    CHECK(env.task == sim::TaskId::Pour);
    CHECK(env.keypoints == kDefaultKeypointCount);
    CHECK(env.lookahead == 8);
}

TEST_CASE("config: errors name the offending field") {
    expect_config_error(R"({})", "task");
    expect_config_error(R"({"task": "pick-place", "grip": 3})", "grip");
    expect_config_error(R"({"task": 7})", "task");
    expect_config_error(R"({"task": "no-such-task"})", "no-such-task");
    expect_config_error(R"({"task": "open", "variant": "fancy"})", "fancy");
    expect_config_error(R"({"task": "open", "seeds": []})", "seeds");
    expect_config_error(R"({"task": "open", "seeds": [-1]})", "seeds");
    expect_config_error(R"({"task": "open", "keypoints": 3})", "keypoints");
    expect_config_error(R"({"task": "open", "keypoints": 129})", "keypoints");
    expect_config_error(R"({"task": "open", "noise": "mystery"})", "mystery");
    expect_config_error(R"({"task": "open", "noise": {"gauss": -1.0}})", "gauss");
    expect_config_error(R"({"task": "open", "train": {"batch": 0}})", "batch");
    expect_config_error(R"({"task": "open", "train": {"warmup": 3}})", "warmup");
    expect_config_error(R"({"task": "open", "ablate": {"axis": "sideways"}})", "axis");
    expect_config_error(R"({"task": "open", "ablate": {"episodes": 0}})", "episodes");
    expect_config_error("{not json", "config");
    // The error type is part of the CLI contract: one catchable kind.
    CHECK_THROWS_AS((void)config_from_json("[1, 2]"), ConfigError);
    CHECK_THROWS_AS((void)config_from_file("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("config: explicit noise scales and preset names both work") {
    const ExperimentConfig preset = config_from_json(R"({"task": "open", "noise": "gauss2-drift1"})");
    CHECK(preset.noise_name == "gauss2-drift1");
    CHECK(preset.noise.gauss_scale == 2.0);
    CHECK(preset.noise.drift_scale == 1.0);

    const ExperimentConfig custom =
        config_from_json(R"({"task": "open", "noise": {"gauss": 1.5, "drift": 0.25}})");
    CHECK(custom.noise_name == "custom");
    CHECK(custom.noise.gauss_scale == 1.5);
    CHECK(custom.noise.drift_scale == 0.25);
}

TEST_CASE("config: canonical hash ignores key order and spacing, tracks content") {
    const ExperimentConfig a = config_from_json(R"({"task": "pour", "keypoints": 64})");
    const ExperimentConfig b = config_from_json(
        "{\n  \"keypoints\": 64,\n\n  \"task\":   \"pour\"\n}");
    CHECK(a.canonical_json() == b.canonical_json());
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);

    // Explicit defaults hash like omitted defaults: the hash is of the
    // effective experiment, not the file text.
    const ExperimentConfig c = config_from_json(R"({"task": "pour", "keypoints": 64, "lookahead": 8})");
    CHECK(c.hash() == a.hash());

    const ExperimentConfig d = config_from_json(R"({"task": "pour", "keypoints": 32})");
    CHECK(d.hash() != a.hash());
}

TEST_CASE("config: command-line overrides replace the seed list and output directory") {
    ExperimentConfig cfg = config_from_json(R"({"task": "open", "seeds": [4, 5, 6]})");
    ConfigOverrides ov;
    ov.seed = 42;
    ov.out_dir = "elsewhere";
    apply_overrides(cfg, ov);
    CHECK(cfg.seeds == std::vector<std::uint64_t>{42});
    CHECK(cfg.out_dir == "elsewhere");

    const std::string hash_before = cfg.hash();
    apply_overrides(cfg, ConfigOverrides{});  // no-op
    CHECK(cfg.hash() == hash_before);
}

TEST_CASE("fnv1a matches the published 64-bit test vectors") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
    CHECK(hash_hex("") == "cbf29ce484222325");
    CHECK(hash_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("format_number: emitted text parses back to the identical double") {
    const double values[] = {0.0,   1.0,        -1.0,   0.1,    1.0 / 3.0, 2.0 / 7.0,
                             1e-9,  123456.789, 0.99,   -0.25,  1e300,     4.9e-324,
                             0.3F * 0.7F};
    for (const double v : values) {
        const std::string text = format_number(v);
        char* end = nullptr;
        const double back = std::strtod(text.c_str(), &end);
        CHECK(end == text.c_str() + text.size());
        CHECK(back == v);
    }
    CHECK(format_number(0.25) == "0.25");
    CHECK(format_number(2.0) == "2");
}

TEST_CASE("record-expert and perturb round-trip through flow files; zero noise is the identity") {
    const std::string dir = fresh_dir("flows");
    const std::string clean_path = dir + "/expert.flow.json";
    const std::string written = cmd_record_expert(sim::TaskId::PickPlace, 7, 32, clean_path);
    CHECK(written == clean_path);

    const FlowFile file = load_flow_file(clean_path);
    CHECK(file.task == "pick-place");
    CHECK(file.flow.keypoints == 32);
    CHECK(file.flow.frames == sim::kMaxEpisodeSteps + 1);

    // Zero-scale noise reproduces the input flow byte-for-byte.
    const std::string same_path = dir + "/same.flow.json";
    cmd_perturb(clean_path, "none", 5, same_path);
    CHECK(slurp(same_path) == slurp(clean_path));

    // Real noise changes positions but keeps the shape.
    const std::string noised_path = dir + "/noised.flow.json";
    cmd_perturb(clean_path, "gauss2-drift1", 5, noised_path);
    const FlowFile noised = load_flow_file(noised_path);
    CHECK(noised.flow.frames == file.flow.frames);
    CHECK(noised.flow.keypoints == file.flow.keypoints);
    CHECK(slurp(noised_path) != slurp(clean_path));

    CHECK_THROWS_AS((void)cmd_perturb(clean_path, "imaginary", 5, noised_path), ConfigError);
    CHECK_THROWS_AS((void)cmd_perturb(dir + "/missing.json", "none", 5, noised_path), ParseError);
}

TEST_CASE("score: a flow scored against itself earns 1.0 at every step") {
    const std::string dir = fresh_dir("score_self");
    const std::string path = dir + "/a.flow.json";
    cmd_record_expert(sim::TaskId::Pour, 3, 32, path);
    const ScoreResult r = cmd_score(path, path, RewardScale{}, dir + "/self.csv");
    CHECK(!r.per_step.empty());
    for (const double v : r.per_step) CHECK(v == 1.0);
    CHECK(r.mean == 1.0);
    CHECK(r.total == static_cast<double>(r.per_step.size()));
    for (std::size_t i = 0; i < r.aligned.size(); ++i) {
        CHECK(r.aligned[i] == static_cast<int>(i));  // equal lengths align identically
    }
}

TEST_CASE("score: noise lowers the mean in proportion to its magnitude") {
    const std::string dir = fresh_dir("score_noise");
    double gauss_total = 0.0;
    double drift_total = 0.0;
    const int episodes = 5;
    for (int e = 0; e < episodes; ++e) {
        const std::uint64_t seed = 100 + static_cast<std::uint64_t>(e);
        const std::string clean = dir + "/clean" + std::to_string(e) + ".json";
        cmd_record_expert(sim::TaskId::PickPlace, seed, 32, clean);
        const std::string gauss = dir + "/gauss" + std::to_string(e) + ".json";
        const std::string drift = dir + "/drift" + std::to_string(e) + ".json";
        cmd_perturb(clean, "gauss1-drift0", seed, gauss);
        cmd_perturb(clean, "gauss2-drift2", seed, drift);
        const double g = cmd_score(clean, gauss, RewardScale{}, dir + "/g.csv").mean;
        const double d = cmd_score(clean, drift, RewardScale{}, dir + "/d.csv").mean;
        CHECK(g > 0.0);
        CHECK(g < 1.0);
        CHECK(d > 0.0);
        CHECK(d < 1.0);
        gauss_total += g;
        drift_total += d;
    }
    // The large-drift copy scores strictly below the mild-gauss copy.
    CHECK(drift_total / episodes < gauss_total / episodes);
}

TEST_CASE("score: flows from different tasks score far below a matched pair") {
    const std::string dir = fresh_dir("score_tasks");
    double worst_gap = 1.0;
    for (std::uint64_t seed : {41ULL, 42ULL, 43ULL}) {
        const std::string a = dir + "/pick" + std::to_string(seed) + ".json";
        const std::string b = dir + "/pour" + std::to_string(seed) + ".json";
        cmd_record_expert(sim::TaskId::PickPlace, seed, 32, a);
        cmd_record_expert(sim::TaskId::Pour, seed, 32, b);
        const double matched = cmd_score(a, a, RewardScale{}, dir + "/m.csv").mean;
        const double mismatched = cmd_score(a, b, RewardScale{}, dir + "/x.csv").mean;
        CHECK(matched == 1.0);
        worst_gap = std::min(worst_gap, matched - mismatched);
    }
    CHECK(worst_gap >= 0.3);
}

TEST_CASE("score: the CSV carries provenance and cumulative sums; reruns are byte-identical") {
    const std::string dir = fresh_dir("score_csv");
    const std::string a = dir + "/a.json";
    const std::string b = dir + "/b.json";
    cmd_record_expert(sim::TaskId::Open, 9, 16, a);
    cmd_perturb(a, "gauss1-drift0", 9, b);

    const std::string out = dir + "/score.csv";
    const ScoreResult r = cmd_score(a, b, RewardScale{}, out);
    const std::string first = slurp(out);
    const Csv csv = parse_csv(first);
    CHECK(csv.header == "step,ref_step,reward,cumulative");
    REQUIRE(csv.rows.size() == r.per_step.size());
    double running = 0.0;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        REQUIRE(csv.rows[i].size() == 4);
        CHECK(to_double(csv.rows[i][0]) == static_cast<double>(i));
        CHECK(to_double(csv.rows[i][2]) == r.per_step[i]);
        running += r.per_step[i];
        CHECK(to_double(csv.rows[i][3]) == running);  // exact: shortest round-trip
    }

    cmd_score(a, b, RewardScale{}, out);
    CHECK(slurp(out) == first);

    // Scoring different inputs stamps a different provenance hash.
    const std::string out2 = dir + "/score2.csv";
    cmd_score(a, a, RewardScale{}, out2);
    CHECK(parse_csv(slurp(out2)).hash != csv.hash);
}

TEST_CASE("train: three seeds write exactly three curve files, three checkpoints, one summary") {
    const std::string dir = fresh_dir("train_files");
    const ExperimentConfig cfg = config_from_json(tiny_train_json(dir));
    const TrainArtifacts art = cmd_train(cfg);

    REQUIRE(art.curve_files.size() == 3);
    REQUIRE(art.checkpoint_files.size() == 3);
    REQUIRE(art.results.size() == 3);
    CHECK(fs::exists(art.summary_file));
    for (const auto& f : art.curve_files) CHECK(fs::exists(f));
    for (const auto& f : art.checkpoint_files) CHECK(fs::exists(f));

    // Nothing else: 3 curves + 3 checkpoints + 1 summary.
    std::size_t entries = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        (void)entry;
        ++entries;
    }
    CHECK(entries == 7);

    // Curves carry one row per eval point, tagged with their seed.
    const Csv curve = parse_csv(slurp(art.curve_files[0]));
    CHECK(curve.header == "step,seed,success_rate,mean_reward");
    REQUIRE(curve.rows.size() == art.results[0].curve.size());
    CHECK(curve.rows.size() == 3);  // eval at steps 0, 300, 600
    for (const auto& row : curve.rows) {
        REQUIRE(row.size() == 4);
        CHECK(row[1] == "11");
        const double rate = to_double(row[2]);
        CHECK(rate >= 0.0);
        CHECK(rate <= 1.0);
    }
}

TEST_CASE("train: the summary table recomputes exactly from the curve files") {
    const std::string dir = fresh_dir("train_summary");
    const ExperimentConfig cfg = config_from_json(tiny_train_json(dir));
    const TrainArtifacts art = cmd_train(cfg);

    std::vector<Csv> curves;
    for (const auto& f : art.curve_files) curves.push_back(parse_csv(slurp(f)));
    const Csv summary = parse_csv(slurp(art.summary_file));
    CHECK(summary.header == "step,mean_success,std_success,mean_reward,std_reward");
    REQUIRE(summary.rows.size() == curves[0].rows.size());

    const std::size_t n = curves.size();
    for (std::size_t p = 0; p < summary.rows.size(); ++p) {
        REQUIRE(summary.rows[p].size() == 5);
        CHECK(summary.rows[p][0] == curves[0].rows[p][0]);  // same step column
        for (int metric = 0; metric < 2; ++metric) {
            const std::size_t col = metric == 0 ? 2 : 3;  // success_rate / mean_reward
            double sum = 0.0;
            for (const Csv& c : curves) sum += to_double(c.rows[p][col]);
            const double mean = sum / static_cast<double>(n);
            double sq = 0.0;
            for (const Csv& c : curves) {
                const double dev = to_double(c.rows[p][col]) - mean;
                sq += dev * dev;
            }
            const double stddev = std::sqrt(sq / static_cast<double>(n));
            const double mean_got = to_double(summary.rows[p][metric == 0 ? 1 : 3]);
            const double std_got = to_double(summary.rows[p][metric == 0 ? 2 : 4]);
            CHECK(mean_got == doctest::Approx(mean).epsilon(1e-12));
            CHECK(std_got == doctest::Approx(stddev).epsilon(1e-12));
        }
    }
}

TEST_CASE("train: rerunning the identical config reproduces every artifact byte-for-byte") {
    const std::string dir = fresh_dir("train_rerun");
    const ExperimentConfig cfg = config_from_json(tiny_train_json(dir, "[21, 22]"));

    const TrainArtifacts first = cmd_train(cfg);
    std::vector<std::string> paths = first.curve_files;
    paths.insert(paths.end(), first.checkpoint_files.begin(), first.checkpoint_files.end());
    paths.push_back(first.summary_file);
    std::vector<std::string> before;
    for (const auto& p : paths) before.push_back(slurp(p));

    (void)cmd_train(cfg);
    for (std::size_t i = 0; i < paths.size(); ++i) CHECK(slurp(paths[i]) == before[i]);
}

TEST_CASE("evaluate: writes one row per episode and validates its inputs") {
    const std::string dir = fresh_dir("evaluate");
    const ExperimentConfig cfg = config_from_json(tiny_train_json(dir, "[31]"));
    const TrainArtifacts art = cmd_train(cfg);
    REQUIRE(art.checkpoint_files.size() == 1);

    const std::string out = dir + "/eval.csv";
    const double rate = cmd_evaluate(cfg, art.checkpoint_files[0], 5, 77, out);
    CHECK(rate >= 0.0);
    CHECK(rate <= 1.0);
    const std::string first = slurp(out);
    const Csv csv = parse_csv(first);
    CHECK(csv.header == "episode,seed,success,episode_return");
    REQUIRE(csv.rows.size() == 5);
    double successes = 0.0;
    for (const auto& row : csv.rows) {
        REQUIRE(row.size() == 4);
        const double s = to_double(row[2]);
        CHECK((s == 0.0 || s == 1.0));
        successes += s;
    }
    CHECK(successes / 5.0 == rate);

    // Byte-identical rerun.
    cmd_evaluate(cfg, art.checkpoint_files[0], 5, 77, out);
    CHECK(slurp(out) == first);

    CHECK_THROWS_AS((void)cmd_evaluate(cfg, art.checkpoint_files[0], 0, 77, out), ConfigError);

    // A checkpoint trained on a different observation layout is rejected.
    ExperimentConfig other = cfg;
    other.lookahead = 3;
    CHECK_THROWS_AS((void)cmd_evaluate(other, art.checkpoint_files[0], 5, 77, out), ConfigError);
}

TEST_CASE("ablate: the noise axis scores every preset, exact 1.0 for zero noise") {
    const std::string dir = fresh_dir("ablate_noise");
    ExperimentConfig cfg = config_from_json(R"({
      "task": "pick-place",
      "keypoints": 32,
      "seeds": [5],
      "out": ")" + dir + R"(",
      "ablate": {"axis": "noise", "episodes": 20}
    })");
    const AblateArtifacts art = cmd_ablate(cfg);
    CHECK(art.curve_files.empty());  // replay study, no training

    const std::string first = slurp(art.table_file);
    const Csv csv = parse_csv(first);
    CHECK(csv.header == "preset,gauss,drift,episodes,mean_step_reward,std_step_reward");
    REQUIRE(csv.rows.size() == 5);
    REQUIRE(art.labels.size() == 5);

    double none_mean = -1.0;
    std::vector<std::pair<std::pair<double, double>, double>> by_scale;  // (gauss,drift) -> mean
    for (const auto& row : csv.rows) {
        REQUIRE(row.size() == 6);
        CHECK(row[3] == "20");
        const double mean = to_double(row[4]);
        CHECK(mean >= 0.0);
        CHECK(mean <= 1.0);
        if (row[0] == "none") none_mean = mean;
        by_scale.push_back({{to_double(row[1]), to_double(row[2])}, mean});
    }
    CHECK(none_mean == 1.0);  // zero noise reproduces the flow exactly

    // Monotone nonincreasing along every comparable pair of the componentwise
    // (gauss, drift) order.
    for (const auto& [sa, ma] : by_scale) {
        for (const auto& [sb, mb] : by_scale) {
            if (sa.first <= sb.first && sa.second <= sb.second &&
                (sa.first < sb.first || sa.second < sb.second)) {
                CHECK(ma >= mb);
            }
        }
    }

    (void)cmd_ablate(cfg);
    CHECK(slurp(art.table_file) == first);  // byte-identical rerun
}

TEST_CASE("ablate: the variant axis retrains each reward flavor on identical seeds") {
    const std::string dir = fresh_dir("ablate_variant");
    ExperimentConfig cfg = config_from_json(R"({
      "task": "pick-place",
      "keypoints": 16,
      "lookahead": 2,
      "seeds": [3],
      "out": ")" + dir + R"(",
      "train": {
        "hidden": 16, "total_steps": 400, "seed_frames": 150, "expl_steps": 100,
        "batch": 32, "eval_every": 200, "eval_episodes": 2,
        "stddev": {"init": 1.0, "final": 0.1, "duration": 300}
      },
      "ablate": {"axis": "variant", "variants": ["delta-flow", "sparse-only"]}
    })");
    const AblateArtifacts art = cmd_ablate(cfg);

    REQUIRE(art.labels == std::vector<std::string>{"delta-flow", "sparse-only"});
    REQUIRE(art.curve_files.size() == 2);  // one per variant x one seed
    for (const auto& f : art.curve_files) {
        const Csv curve = parse_csv(slurp(f));
        REQUIRE(!curve.rows.empty());
        CHECK(curve.rows[0][1] == "3");  // same seed for both families
    }

    const Csv table = parse_csv(slurp(art.table_file));
    CHECK(table.header == "step,label,mean_success,std_success");
    REQUIRE(table.rows.size() == 6);  // 3 eval points x 2 variants
    int delta_rows = 0;
    int sparse_rows = 0;
    for (const auto& row : table.rows) {
        if (row[1] == "delta-flow") ++delta_rows;
        if (row[1] == "sparse-only") ++sparse_rows;
    }
    CHECK(delta_rows == 3);
    CHECK(sparse_rows == 3);

    ExperimentConfig bad = cfg;
    bad.ablate.variants = {"delta-flow"};
    CHECK_THROWS_AS((void)cmd_ablate(bad), ConfigError);
}

TEST_CASE("ablate: the keypoint axis runs 32/64/128 under one budget") {
    const std::string dir = fresh_dir("ablate_k");
    ExperimentConfig cfg = config_from_json(R"({
      "task": "pick-place",
      "lookahead": 2,
      "seeds": [3],
      "out": ")" + dir + R"(",
      "train": {
        "hidden": 16, "total_steps": 300, "seed_frames": 150, "expl_steps": 100,
        "batch": 32, "eval_every": 300, "eval_episodes": 1,
        "stddev": {"init": 1.0, "final": 0.1, "duration": 200}
      },
      "ablate": {"axis": "keypoints", "keypoints": [32, 64, 128]}
    })");
    const AblateArtifacts art = cmd_ablate(cfg);
    CHECK(art.labels == std::vector<std::string>{"k32", "k64", "k128"});
    CHECK(art.curve_files.size() == 3);
    const Csv table = parse_csv(slurp(art.table_file));
    REQUIRE(table.rows.size() == 6);  // 2 eval points x 3 counts
}
