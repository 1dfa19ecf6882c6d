#pragma once

#include <string>

#include "dflow/flow.hpp"

namespace dflow {

// On-disk flow record: versioned JSON with canvas metadata and a task label.
// Fields: version, canvas: [w,h], task, positions: [[[x,y],...N],...T],
// visibility: [[bool,...N],...T], optional mask (path to a region raster).
struct FlowFile {
    int version = 1;
    std::string task;
    int canvas_w = 480;
    int canvas_h = 480;
    std::string mask_ref;  // empty when absent
    KeypointFlow flow;
};

inline constexpr int kFlowFileVersion = 1;

// Parse and validate a flow record. Throws ParseError (unreadable/bad JSON),
// SchemaMismatch (wrong version, missing fields, ragged arrays), or
// InvariantViolation (non-finite positions, too few frames/keypoints).
// A JSON null in a coordinate slot is read as NaN and rejected by validation.
FlowFile load_flow_file(const std::string& path);

// Convenience: load and return just the keypoint flow.
KeypointFlow load_flow(const std::string& path);

// Serialize. Numeric round-trip is exact (shortest-representation doubles),
// so save -> load -> save produces byte-identical files.
void save_flow_file(const FlowFile& file, const std::string& path);

std::string flow_file_to_json(const FlowFile& file);
FlowFile flow_file_from_json(const std::string& text, const std::string& origin = "<string>");

}  // namespace dflow
