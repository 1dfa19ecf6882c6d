#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dflow {

// Region-label raster plus a per-region pixel-area table. The raster is a
// portable graymap (P2 or P5) whose gray values are region labels; row index
// equals the integer y pixel coordinate. The JSON area table maps each label
// occurring in the raster to its region area in pixels^2.
struct MaskSet {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> labels;    // row-major, labels[y * width + x]
    std::map<int, double> region_area;    // label -> pixels^2

    int label_at(double x, double y) const;
    double area_at(double x, double y) const;
};

// Throws ParseError on unreadable files, SchemaMismatch when the raster and
// area table disagree (missing labels) or areas are < 1.
MaskSet load_mask_set(const std::string& pgm_path, const std::string& area_json_path);

// Helpers used by fixtures and the expert recorder.
MaskSet parse_pgm(const std::string& text, const std::string& origin = "<string>");
void save_mask_set(const MaskSet& masks, const std::string& pgm_path,
                   const std::string& area_json_path);

}  // namespace dflow
