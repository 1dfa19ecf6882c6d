#include "dflow/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"

namespace dflow::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& field, const std::string& why) {
    throw ConfigError(origin + ": field '" + field + "': " + why);
}

void expect_keys(const json& obj, const std::string& origin, const std::string& scope,
                 const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw ConfigError(origin + ": unknown field '" + (scope.empty() ? key : scope + "." + key) + "'");
        }
    }
}

// Lookups use the local key; diagnostics use the scoped name ("train.batch").
std::string scoped(const std::string& scope, const std::string& field) {
    return scope.empty() ? field : scope + "." + field;
}

long long get_int(const json& obj, const std::string& origin, const std::string& scope,
                  const std::string& field, long long fallback) {
    if (!obj.contains(field)) return fallback;
    const json& v = obj[field];
    if (!v.is_number_integer()) fail(origin, scoped(scope, field), "expected an integer");
    return v.get<long long>();
}

double get_num(const json& obj, const std::string& origin, const std::string& scope,
               const std::string& field, double fallback) {
    if (!obj.contains(field)) return fallback;
    const json& v = obj[field];
    if (!v.is_number()) fail(origin, scoped(scope, field), "expected a number");
    return v.get<double>();
}

std::string get_str(const json& obj, const std::string& origin, const std::string& scope,
                    const std::string& field, const std::string& fallback) {
    if (!obj.contains(field)) return fallback;
    const json& v = obj[field];
    if (!v.is_string()) fail(origin, scoped(scope, field), "expected a string");
    return v.get<std::string>();
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;  // FNV-1a 64-bit offset basis
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(const std::string& text) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a(text);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

sim::EnvConfig ExperimentConfig::env_config() const {
    sim::EnvConfig env;
    env.task = task;
    env.variant = variant;
    env.noise = noise;
    env.keypoints = keypoints;
    env.lookahead = lookahead;
    return env;
}

rl::TrainConfig ExperimentConfig::train_config() const {
    rl::TrainConfig cfg = train;
    cfg.env = env_config();
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (keypoints < 4 || keypoints > kDefaultKeypointCount) {
        throw ConfigError("config: field 'keypoints': must be between 4 and " +
                          std::to_string(kDefaultKeypointCount));
    }
    if (lookahead < 0) throw ConfigError("config: field 'lookahead': must be >= 0");
    if (seeds.empty()) throw ConfigError("config: field 'seeds': must list at least one seed");
    if (out_dir.empty()) throw ConfigError("config: field 'out': must not be empty");
    if (noise.gauss_scale < 0.0 || !std::isfinite(noise.gauss_scale)) {
        throw ConfigError("config: field 'noise.gauss': must be finite and >= 0");
    }
    if (noise.drift_scale < 0.0 || !std::isfinite(noise.drift_scale)) {
        throw ConfigError("config: field 'noise.drift': must be finite and >= 0");
    }
    if (ablate.axis != "variant" && ablate.axis != "keypoints" && ablate.axis != "noise") {
        throw ConfigError("config: field 'ablate.axis': must be one of variant, keypoints, noise");
    }
    if (ablate.episodes < 1) throw ConfigError("config: field 'ablate.episodes': must be >= 1");
    train_config();  // validates all RL fields (throws ConfigError naming them)
}

std::string ExperimentConfig::canonical_json() const {
    json doc;
    doc["task"] = sim::task_name(task);
    doc["variant"] = reward_variant_name(variant);
    doc["noise"] = json{{"name", noise_name},
                        {"gauss", noise.gauss_scale},
                        {"drift", noise.drift_scale}};
    doc["keypoints"] = keypoints;
    doc["lookahead"] = lookahead;
    doc["seeds"] = seeds;
    doc["out"] = out_dir;
    doc["train"] = json{{"total_steps", train.total_steps},
                        {"hidden", train.hidden},
                        {"seed_frames", train.seed_frames},
                        {"expl_steps", train.expl_steps},
                        {"replay_capacity", train.replay_capacity},
                        {"batch", train.batch},
                        {"update_every", train.update_every},
                        {"nstep", train.nstep},
                        {"gamma", train.gamma},
                        {"lr", train.lr},
                        {"tau", train.tau},
                        {"noise_clip", train.noise_clip},
                        {"stddev", json{{"init", train.stddev.init},
                                        {"final", train.stddev.final_value},
                                        {"duration", train.stddev.duration}}},
                        {"eval_every", train.eval_every},
                        {"eval_episodes", train.eval_episodes}};
    doc["ablate"] = json{{"axis", ablate.axis},
                         {"variants", ablate.variants},
                         {"keypoints", ablate.keypoint_counts},
                         {"episodes", ablate.episodes}};
    return doc.dump();
}

std::string ExperimentConfig::hash() const { return hash_hex(canonical_json()); }

ExperimentConfig config_from_json(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(origin + ": top level must be a JSON object");
    expect_keys(doc, origin, "",
                {"task", "variant", "noise", "keypoints", "lookahead", "seeds", "out", "train", "ablate"});

    ExperimentConfig cfg;
    if (!doc.contains("task")) throw ConfigError(origin + ": missing required field 'task'");
    if (!doc["task"].is_string()) fail(origin, "task", "expected a string");
    try {
        cfg.task = sim::task_from_name(doc["task"].get<std::string>());
    } catch (const UnknownTask& e) {
        fail(origin, "task", e.what());
    }

    const std::string variant_name =
        get_str(doc, origin, "", "variant", reward_variant_name(cfg.variant));
    try {
        cfg.variant = reward_variant_from_name(variant_name);
    } catch (const ConfigError& e) {
        fail(origin, "variant", e.what());
    }

    if (doc.contains("noise")) {
        const json& n = doc["noise"];
        if (n.is_string()) {
            cfg.noise_name = n.get<std::string>();
            try {
                cfg.noise = preset_from_name(cfg.noise_name);
            } catch (const ConfigError& e) {
                fail(origin, "noise", e.what());
            }
        } else if (n.is_object()) {
            expect_keys(n, origin, "noise", {"gauss", "drift"});
            cfg.noise_name = "custom";
            cfg.noise.gauss_scale = get_num(n, origin, "noise", "gauss", 0.0);
            cfg.noise.drift_scale = get_num(n, origin, "noise", "drift", 0.0);
        } else {
            fail(origin, "noise", "expected a preset name or {gauss, drift} object");
        }
    }

    cfg.keypoints = static_cast<int>(get_int(doc, origin, "", "keypoints", cfg.keypoints));
    cfg.lookahead = static_cast<int>(get_int(doc, origin, "", "lookahead", cfg.lookahead));
    cfg.out_dir = get_str(doc, origin, "", "out", cfg.out_dir);

    if (doc.contains("seeds")) {
        const json& s = doc["seeds"];
        if (!s.is_array() || s.empty()) fail(origin, "seeds", "expected a non-empty array");
        cfg.seeds.clear();
        for (const json& v : s) {
            if (!v.is_number_integer() || v.get<long long>() < 0) {
                fail(origin, "seeds", "expected non-negative integers");
            }
            cfg.seeds.push_back(v.get<std::uint64_t>());
        }
    }

    if (doc.contains("train")) {
        const json& t = doc["train"];
        if (!t.is_object()) fail(origin, "train", "expected an object");
        expect_keys(t, origin, "train",
                    {"total_steps", "hidden", "seed_frames", "expl_steps", "replay_capacity",
                     "batch", "update_every", "nstep", "gamma", "lr", "tau", "noise_clip",
                     "stddev", "eval_every", "eval_episodes"});
        rl::TrainConfig& tr = cfg.train;
        tr.total_steps = get_int(t, origin, "train", "total_steps", tr.total_steps);
        tr.hidden = static_cast<int>(get_int(t, origin, "train", "hidden", tr.hidden));
        tr.seed_frames = get_int(t, origin, "train", "seed_frames", tr.seed_frames);
        tr.expl_steps = get_int(t, origin, "train", "expl_steps", tr.expl_steps);
        tr.replay_capacity =
            static_cast<int>(get_int(t, origin, "train", "replay_capacity", tr.replay_capacity));
        tr.batch = static_cast<int>(get_int(t, origin, "train", "batch", tr.batch));
        tr.update_every = static_cast<int>(get_int(t, origin, "train", "update_every", tr.update_every));
        tr.nstep = static_cast<int>(get_int(t, origin, "train", "nstep", tr.nstep));
        tr.gamma = get_num(t, origin, "train", "gamma", tr.gamma);
        tr.lr = get_num(t, origin, "train", "lr", tr.lr);
        tr.tau = get_num(t, origin, "train", "tau", tr.tau);
        tr.noise_clip = get_num(t, origin, "train", "noise_clip", tr.noise_clip);
        if (t.contains("stddev")) {
            const json& s = t["stddev"];
            if (!s.is_object()) fail(origin, "train.stddev", "expected an object");
            expect_keys(s, origin, "train.stddev", {"init", "final", "duration"});
            tr.stddev.init = get_num(s, origin, "train.stddev", "init", tr.stddev.init);
            tr.stddev.final_value = get_num(s, origin, "train.stddev", "final", tr.stddev.final_value);
            tr.stddev.duration = get_int(s, origin, "train.stddev", "duration", tr.stddev.duration);
        }
        tr.eval_every = get_int(t, origin, "train", "eval_every", tr.eval_every);
        tr.eval_episodes = static_cast<int>(get_int(t, origin, "train", "eval_episodes", tr.eval_episodes));
    }

    if (doc.contains("ablate")) {
        const json& a = doc["ablate"];
        if (!a.is_object()) fail(origin, "ablate", "expected an object");
        expect_keys(a, origin, "ablate", {"axis", "variants", "keypoints", "episodes"});
        cfg.ablate.axis = get_str(a, origin, "ablate", "axis", cfg.ablate.axis);
        if (a.contains("variants")) {
            if (!a["variants"].is_array()) fail(origin, "ablate.variants", "expected an array");
            for (const json& v : a["variants"]) {
                if (!v.is_string()) fail(origin, "ablate.variants", "expected variant names");
                cfg.ablate.variants.push_back(v.get<std::string>());
            }
        }
        if (a.contains("keypoints")) {
            if (!a["keypoints"].is_array()) fail(origin, "ablate.keypoints", "expected an array");
            for (const json& v : a["keypoints"]) {
                if (!v.is_number_integer()) fail(origin, "ablate.keypoints", "expected integers");
                cfg.ablate.keypoint_counts.push_back(v.get<int>());
            }
        }
        cfg.ablate.episodes = static_cast<int>(get_int(a, origin, "ablate", "episodes", cfg.ablate.episodes));
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
    std::string text;
    {
        std::FILE* f = std::fopen(path.c_str(), "rb");
        if (!f) throw ConfigError("config: cannot open file: " + path);
        char buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, n);
        std::fclose(f);
    }
    return config_from_json(text, path);
}

void apply_overrides(ExperimentConfig& cfg, const ConfigOverrides& ov) {
    if (ov.seed) cfg.seeds = {*ov.seed};
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    cfg.validate();
}

}  // namespace dflow::cli
