#include "dflow/mask.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dflow/error.hpp"

namespace dflow {

namespace {

using nlohmann::json;

// Reads the next whitespace-separated token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    for (;;) {
        int c = in.peek();
        if (c == EOF) break;
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        in >> tok;
        break;
    }
    return tok;
}

int token_to_int(const std::string& tok, const std::string& origin, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(origin + ": bad " + std::string(what) + " token '" + tok + "'");
    }
}

}  // namespace

MaskSet parse_pgm(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    const std::string magic = next_token(in);
    if (magic != "P2" && magic != "P5") {
        throw ParseError(origin + ": not a PGM (magic '" + magic + "')");
    }
    MaskSet out;
    out.width = token_to_int(next_token(in), origin, "width");
    out.height = token_to_int(next_token(in), origin, "height");
    const int maxval = token_to_int(next_token(in), origin, "maxval");
    if (out.width < 1 || out.height < 1 || maxval < 1 || maxval > 65535) {
        throw ParseError(origin + ": bad PGM dimensions or maxval");
    }
    const std::size_t count = static_cast<std::size_t>(out.width) * out.height;
    out.labels.resize(count);

    if (magic == "P2") {
        for (std::size_t i = 0; i < count; ++i) {
            const int v = token_to_int(next_token(in), origin, "pixel");
            if (v < 0 || v > maxval) throw ParseError(origin + ": pixel out of range");
            out.labels[i] = static_cast<std::uint16_t>(v);
        }
    } else {
        // Exactly one whitespace byte separates the header from binary data.
        in.get();
        const int bytes = maxval > 255 ? 2 : 1;
        for (std::size_t i = 0; i < count; ++i) {
            int v = in.get();
            if (v == EOF) throw ParseError(origin + ": truncated raster");
            if (bytes == 2) {
                const int lo = in.get();
                if (lo == EOF) throw ParseError(origin + ": truncated raster");
                v = (v << 8) | lo;
            }
            if (v > maxval) throw ParseError(origin + ": pixel out of range");
            out.labels[i] = static_cast<std::uint16_t>(v);
        }
    }
    return out;
}

int MaskSet::label_at(double x, double y) const {
    int px = static_cast<int>(std::floor(x));
    int py = static_cast<int>(std::floor(y));
    if (px < 0) px = 0;
    if (px > width - 1) px = width - 1;
    if (py < 0) py = 0;
    if (py > height - 1) py = height - 1;
    return labels[static_cast<std::size_t>(py) * width + px];
}

double MaskSet::area_at(double x, double y) const {
    const int label = label_at(x, y);
    const auto it = region_area.find(label);
    if (it == region_area.end()) {
        throw SchemaMismatch("mask region " + std::to_string(label) + " has no area entry");
    }
    return it->second;
}

MaskSet load_mask_set(const std::string& pgm_path, const std::string& area_json_path) {
    std::ifstream pgm_in(pgm_path, std::ios::binary);
    if (!pgm_in) throw ParseError("cannot open mask raster: " + pgm_path);
    std::ostringstream pgm_buf;
    pgm_buf << pgm_in.rdbuf();
    MaskSet out = parse_pgm(pgm_buf.str(), pgm_path);

    std::ifstream json_in(area_json_path, std::ios::binary);
    if (!json_in) throw ParseError("cannot open area table: " + area_json_path);
    json doc;
    try {
        doc = json::parse(json_in);
    } catch (const json::parse_error& e) {
        throw ParseError(area_json_path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("areas") || !doc["areas"].is_object()) {
        throw SchemaMismatch(area_json_path + ": expected object with 'areas'");
    }
    for (const auto& [key, value] : doc["areas"].items()) {
        int label = 0;
        try {
            label = std::stoi(key);
        } catch (const std::exception&) {
            throw SchemaMismatch(area_json_path + ": non-integer label key '" + key + "'");
        }
        if (!value.is_number()) {
            throw SchemaMismatch(area_json_path + ": area for label " + key + " is not a number");
        }
        const double area = value.get<double>();
        if (!(area >= 1.0)) {
            throw SchemaMismatch(area_json_path + ": region area must be >= 1, got " +
                                 std::to_string(area));
        }
        out.region_area[label] = area;
    }

    std::set<int> seen(out.labels.begin(), out.labels.end());
    for (int label : seen) {
        if (!out.region_area.count(label)) {
            throw SchemaMismatch(area_json_path + ": raster label " + std::to_string(label) +
                                 " missing from area table");
        }
    }
    return out;
}

void save_mask_set(const MaskSet& masks, const std::string& pgm_path,
                   const std::string& area_json_path) {
    int maxval = 1;
    for (const std::uint16_t v : masks.labels) maxval = std::max<int>(maxval, v);

    std::ofstream pgm(pgm_path, std::ios::binary | std::ios::trunc);
    if (!pgm) throw ParseError("cannot open for writing: " + pgm_path);
    pgm << "P5\n" << masks.width << ' ' << masks.height << '\n' << maxval << '\n';
    const int bytes = maxval > 255 ? 2 : 1;
    for (const std::uint16_t v : masks.labels) {
        if (bytes == 2) pgm.put(static_cast<char>(v >> 8));
        pgm.put(static_cast<char>(v & 0xFF));
    }
    if (!pgm) throw ParseError("write failed: " + pgm_path);

    json areas = json::object();
    for (const auto& [label, area] : masks.region_area) {
        areas[std::to_string(label)] = area;
    }
    json doc;
    doc["version"] = 1;
    doc["areas"] = std::move(areas);
    std::ofstream table(area_json_path, std::ios::binary | std::ios::trunc);
    if (!table) throw ParseError("cannot open for writing: " + area_json_path);
    table << doc.dump() << '\n';
    if (!table) throw ParseError("write failed: " + area_json_path);
}

}  // namespace dflow
