#include "dflow/flow_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace dflow {

namespace {

using nlohmann::json;

double coord_from_json(const json& v, const std::string& origin) {
    if (v.is_number()) return v.get<double>();
    // NaN/inf cannot be represented in JSON and serialize as null; map null
    // back to NaN so flow validation rejects it with the right error.
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    throw SchemaMismatch(origin + ": coordinate is neither number nor null");
}

}  // namespace

FlowFile flow_file_from_json(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw SchemaMismatch(origin + ": top level is not an object");

    for (const char* field : {"version", "canvas", "task", "positions", "visibility"}) {
        if (!doc.contains(field)) {
            throw SchemaMismatch(origin + ": missing required field '" + field + "'");
        }
    }

    FlowFile out;
    if (!doc["version"].is_number_integer()) {
        throw SchemaMismatch(origin + ": 'version' must be an integer");
    }
    out.version = doc["version"].get<int>();
    if (out.version != kFlowFileVersion) {
        throw SchemaMismatch(origin + ": unsupported version " + std::to_string(out.version));
    }
    if (!doc["task"].is_string()) throw SchemaMismatch(origin + ": 'task' must be a string");
    out.task = doc["task"].get<std::string>();

    const json& canvas = doc["canvas"];
    if (!canvas.is_array() || canvas.size() != 2 || !canvas[0].is_number_integer() ||
        !canvas[1].is_number_integer()) {
        throw SchemaMismatch(origin + ": 'canvas' must be [width, height]");
    }
    out.canvas_w = canvas[0].get<int>();
    out.canvas_h = canvas[1].get<int>();
    if (out.canvas_w < 1 || out.canvas_h < 1) {
        throw SchemaMismatch(origin + ": canvas dimensions must be positive");
    }

    if (doc.contains("mask")) {
        if (!doc["mask"].is_string()) throw SchemaMismatch(origin + ": 'mask' must be a string");
        out.mask_ref = doc["mask"].get<std::string>();
    }

    const json& pos = doc["positions"];
    const json& vis = doc["visibility"];
    if (!pos.is_array() || pos.empty()) {
        throw SchemaMismatch(origin + ": 'positions' must be a non-empty array of frames");
    }
    if (!vis.is_array() || vis.size() != pos.size()) {
        throw SchemaMismatch(origin + ": 'visibility' frame count differs from 'positions'");
    }
    const int T = static_cast<int>(pos.size());
    if (!pos[0].is_array() || pos[0].empty()) {
        throw SchemaMismatch(origin + ": frame 0 of 'positions' is not a non-empty array");
    }
    const int N = static_cast<int>(pos[0].size());

    out.flow = KeypointFlow::zeros(T, N);
    for (int t = 0; t < T; ++t) {
        const json& frame = pos[t];
        const json& vframe = vis[t];
        if (!frame.is_array() || static_cast<int>(frame.size()) != N) {
            throw SchemaMismatch(origin + ": ragged 'positions' at frame " + std::to_string(t));
        }
        if (!vframe.is_array() || static_cast<int>(vframe.size()) != N) {
            throw SchemaMismatch(origin + ": ragged 'visibility' at frame " + std::to_string(t));
        }
        for (int i = 0; i < N; ++i) {
            const json& pt = frame[i];
            if (!pt.is_array() || pt.size() != 2) {
                throw SchemaMismatch(origin + ": keypoint " + std::to_string(i) + " in frame " +
                                     std::to_string(t) + " is not [x, y]");
            }
            out.flow.at(t, i) = Vec2{coord_from_json(pt[0], origin), coord_from_json(pt[1], origin)};
            if (!vframe[i].is_boolean()) {
                throw SchemaMismatch(origin + ": visibility entries must be booleans");
            }
            out.flow.set_visible(t, i, vframe[i].get<bool>());
        }
    }
    out.flow.validate();
    return out;
}

FlowFile load_flow_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open flow file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return flow_file_from_json(buf.str(), path);
}

KeypointFlow load_flow(const std::string& path) { return load_flow_file(path).flow; }

std::string flow_file_to_json(const FlowFile& file) {
    file.flow.validate();
    json doc;
    doc["version"] = file.version;
    doc["canvas"] = {file.canvas_w, file.canvas_h};
    doc["task"] = file.task;
    if (!file.mask_ref.empty()) doc["mask"] = file.mask_ref;

    json pos = json::array();
    json vis = json::array();
    for (int t = 0; t < file.flow.frames; ++t) {
        json frame = json::array();
        json vframe = json::array();
        for (int i = 0; i < file.flow.keypoints; ++i) {
            const Vec2& p = file.flow.at(t, i);
            frame.push_back({p.x, p.y});
            vframe.push_back(file.flow.visible(t, i));
        }
        pos.push_back(std::move(frame));
        vis.push_back(std::move(vframe));
    }
    doc["positions"] = std::move(pos);
    doc["visibility"] = std::move(vis);
    return doc.dump();
}

void save_flow_file(const FlowFile& file, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << flow_file_to_json(file) << '\n';
    if (!out) throw ParseError("write failed: " + path);
}

}  // namespace dflow
