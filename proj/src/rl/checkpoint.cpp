#include "dflow/rl/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dflow::rl {

namespace {

using nlohmann::json;

json net_to_json(const Net<float>& net) {
    json sizes = json::array();
    sizes.push_back(net.input_size());
    for (int l = 0; l < net.layer_count(); ++l) sizes.push_back(static_cast<int>(net.w[static_cast<std::size_t>(l)].rows()));

    json weights = json::array();
    json biases = json::array();
    for (int l = 0; l < net.layer_count(); ++l) {
        const auto& w = net.w[static_cast<std::size_t>(l)];
        const auto& b = net.b[static_cast<std::size_t>(l)];
        json wl = json::array();
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) wl.push_back(static_cast<double>(w(r, c)));
        }
        json bl = json::array();
        for (Eigen::Index r = 0; r < b.rows(); ++r) bl.push_back(static_cast<double>(b(r)));
        weights.push_back(std::move(wl));
        biases.push_back(std::move(bl));
    }
    return json{{"sizes", std::move(sizes)}, {"weights", std::move(weights)}, {"biases", std::move(biases)}};
}

Net<float> net_from_json(const json& doc, const std::string& origin) {
    for (const char* field : {"sizes", "weights", "biases"}) {
        if (!doc.contains(field) || !doc[field].is_array()) {
            throw SchemaMismatch(origin + ": network missing array field '" + field + "'");
        }
    }
    std::vector<int> sizes;
    for (const json& s : doc["sizes"]) {
        if (!s.is_number_integer()) throw SchemaMismatch(origin + ": network sizes must be integers");
        sizes.push_back(s.get<int>());
    }
    if (sizes.size() < 2) throw SchemaMismatch(origin + ": network needs at least two sizes");
    Rng dummy(0);
    Net<float> net(sizes, dummy);
    const json& weights = doc["weights"];
    const json& biases = doc["biases"];
    if (static_cast<int>(weights.size()) != net.layer_count() ||
        static_cast<int>(biases.size()) != net.layer_count()) {
        throw SchemaMismatch(origin + ": layer count mismatch");
    }
    for (int l = 0; l < net.layer_count(); ++l) {
        auto& w = net.w[static_cast<std::size_t>(l)];
        auto& b = net.b[static_cast<std::size_t>(l)];
        const json& wl = weights[static_cast<std::size_t>(l)];
        const json& bl = biases[static_cast<std::size_t>(l)];
        if (static_cast<Eigen::Index>(wl.size()) != w.size() ||
            static_cast<Eigen::Index>(bl.size()) != b.size()) {
            throw SchemaMismatch(origin + ": parameter array size mismatch at layer " +
                                 std::to_string(l));
        }
        std::size_t k = 0;
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                if (!wl[k].is_number()) throw SchemaMismatch(origin + ": weight is not a number");
                w(r, c) = static_cast<float>(wl[k].get<double>());
                ++k;
            }
        }
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
            if (!bl[static_cast<std::size_t>(r)].is_number()) {
                throw SchemaMismatch(origin + ": bias is not a number");
            }
            b(r) = static_cast<float>(bl[static_cast<std::size_t>(r)].get<double>());
        }
    }
    return net;
}

}  // namespace

std::string checkpoint_to_json(const Agent& agent) {
    json doc;
    doc["version"] = kCheckpointVersion;
    const AgentConfig& c = agent.config();
    doc["config"] = json{{"obs_dim", c.obs_dim},     {"action_dim", c.action_dim},
                         {"hidden", c.hidden},       {"lr", c.lr},
                         {"tau", c.tau},             {"noise_clip", c.noise_clip}};
    doc["actor"] = net_to_json(agent.actor);
    doc["critic1"] = net_to_json(agent.critic1);
    doc["critic2"] = net_to_json(agent.critic2);
    doc["target1"] = net_to_json(agent.target1);
    doc["target2"] = net_to_json(agent.target2);
    return doc.dump() + "\n";
}

Agent checkpoint_from_json(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw SchemaMismatch(origin + ": top level is not an object");
    for (const char* field : {"version", "config", "actor", "critic1", "critic2", "target1", "target2"}) {
        if (!doc.contains(field)) throw SchemaMismatch(origin + ": missing field '" + std::string(field) + "'");
    }
    if (!doc["version"].is_number_integer() || doc["version"].get<int>() != kCheckpointVersion) {
        throw SchemaMismatch(origin + ": unsupported checkpoint version");
    }
    const json& c = doc["config"];
    AgentConfig cfg;
    try {
        cfg.obs_dim = c.at("obs_dim").get<int>();
        cfg.action_dim = c.at("action_dim").get<int>();
        cfg.hidden = c.at("hidden").get<int>();
        cfg.lr = c.at("lr").get<double>();
        cfg.tau = c.at("tau").get<double>();
        cfg.noise_clip = c.at("noise_clip").get<double>();
    } catch (const json::exception& e) {
        throw SchemaMismatch(origin + ": bad config block: " + e.what());
    }
    Agent agent(cfg, 0);
    agent.actor = net_from_json(doc["actor"], origin);
    agent.critic1 = net_from_json(doc["critic1"], origin);
    agent.critic2 = net_from_json(doc["critic2"], origin);
    agent.target1 = net_from_json(doc["target1"], origin);
    agent.target2 = net_from_json(doc["target2"], origin);
    if (agent.actor.input_size() != cfg.obs_dim ||
        agent.actor.output_size() != cfg.action_dim ||
        agent.critic1.input_size() != cfg.obs_dim + cfg.action_dim) {
        throw SchemaMismatch(origin + ": network shapes disagree with the config block");
    }
    return agent;
}

void save_checkpoint(const Agent& agent, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << checkpoint_to_json(agent);
    if (!out) throw ParseError("write failed: " + path);
}

Agent load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return checkpoint_from_json(ss.str(), path);
}

}  // namespace dflow::rl
