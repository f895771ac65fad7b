#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfguard/geometry.hpp"
#include "cfguard/guarding.hpp"
#include "cfguard/polygon.hpp"

namespace cfguard {

using Json = nlohmann::json;

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integers that fit in 64 bits are written as JSON numbers, everything else as "p/q".
inline Json rational_to_json(const Rational& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p()) return Json(static_cast<std::int64_t>(r.get_num().get_si()));
    return Json(to_string(r));
}

inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Rational(std::to_string(j.get<std::uint64_t>()));
        return Rational(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const GeometryError& e) {
            throw FormatError(e.what());
        }
    }
    throw FormatError("coordinate must be an integer or a \"p/q\" string");
}

// Vertex indices in files refer to the vertex list as written; SimplePolygon may reverse it.
struct PolygonFile {
    std::vector<Point> vertices;
    std::optional<std::array<std::size_t, 2>> base;
    std::optional<std::string> name;

    bool operator==(const PolygonFile&) const = default;

    SimplePolygon polygon() const {
        try {
            return SimplePolygon(vertices);
        } catch (const GeometryError& e) {
            throw FormatError(std::string("invalid polygon: ") + e.what());
        }
    }

    // Edge index, in the normalised polygon, of the declared base; nullopt without a base.
    std::optional<std::size_t> base_edge(const SimplePolygon& poly) const {
        if (!base) return std::nullopt;
        auto [i, j] = *base;
        if (i >= poly.size() || j >= poly.size()) throw FormatError("base vertex out of range");
        std::size_t a = poly.input_index_to_own(i), b = poly.input_index_to_own(j);
        if (poly.next(a) == b) return a;
        if (poly.next(b) == a) return b;
        throw FormatError("base is not a polygon edge");
    }

    static PolygonFile from_polygon(const SimplePolygon& poly, std::optional<std::size_t> edge = std::nullopt,
                                    std::optional<std::string> name = std::nullopt) {
        PolygonFile f;
        f.vertices.assign(poly.vertices().begin(), poly.vertices().end());
        if (edge) f.base = std::array<std::size_t, 2>{*edge, poly.next(*edge)};
        f.name = std::move(name);
        return f;
    }
};

inline Json to_json(const PolygonFile& f) {
    Json j;
    j["vertices"] = Json::array();
    for (const auto& p : f.vertices) j["vertices"].push_back(Json::array({rational_to_json(p.x), rational_to_json(p.y)}));
    if (f.base) j["base"] = Json::array({(*f.base)[0], (*f.base)[1]});
    if (f.name) j["name"] = *f.name;
    return j;
}

inline PolygonFile polygon_file_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw FormatError("polygon file needs a \"vertices\" array");
    PolygonFile f;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2) throw FormatError("each vertex must be [x, y]");
        f.vertices.push_back({rational_from_json(v[0]), rational_from_json(v[1])});
    }
    if (j.contains("base")) {
        const auto& b = j["base"];
        if (!b.is_array() || b.size() != 2 || !b[0].is_number_unsigned() || !b[1].is_number_unsigned())
            throw FormatError("\"base\" must be [i, j] with non-negative integers");
        f.base = std::array<std::size_t, 2>{b[0].get<std::size_t>(), b[1].get<std::size_t>()};
    }
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw FormatError("\"name\" must be a string");
        f.name = j["name"].get<std::string>();
    }
    return f;
}

struct GuardEntry {
    std::size_t vertex = 0;
    ColourId colour = 0;
    bool operator==(const GuardEntry&) const = default;
};

struct GuardingFile {
    std::vector<GuardEntry> guards;
    std::size_t palette_size = 0;
    std::string algorithm;
    Json stats = Json::object();

    bool operator==(const GuardingFile&) const = default;

    // Indices are mapped back to the vertex order of the polygon file.
    static GuardingFile from_guarding(const SimplePolygon& poly, const ColouredGuarding& g, std::string algorithm,
                                      Json stats = Json::object()) {
        GuardingFile f;
        for (auto [v, c] : g.assignments) f.guards.push_back({poly.input_index_to_own(v), c});
        std::sort(f.guards.begin(), f.guards.end(), [](const GuardEntry& a, const GuardEntry& b) { return a.vertex < b.vertex; });
        f.palette_size = g.palette_size();
        f.algorithm = std::move(algorithm);
        f.stats = std::move(stats);
        return f;
    }

    ColouredGuarding guarding(const SimplePolygon& poly) const {
        ColouredGuarding g;
        for (const auto& e : guards) {
            if (e.vertex >= poly.size()) throw FormatError("guard vertex out of range");
            if (!g.assignments.emplace(poly.input_index_to_own(e.vertex), e.colour).second)
                throw FormatError("vertex guarded twice");
        }
        if (g.palette_size() != palette_size) throw FormatError("palette_size does not match the guard colours");
        return g;
    }
};

inline Json to_json(const GuardingFile& f) {
    Json j;
    j["guards"] = Json::array();
    for (const auto& e : f.guards) j["guards"].push_back({{"vertex", e.vertex}, {"colour", e.colour}});
    j["palette_size"] = f.palette_size;
    j["algorithm"] = f.algorithm;
    j["stats"] = f.stats;
    return j;
}

inline GuardingFile guarding_file_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("guards") || !j["guards"].is_array())
        throw FormatError("guarding file needs a \"guards\" array");
    GuardingFile f;
    for (const auto& e : j["guards"]) {
        if (!e.is_object() || !e.contains("vertex") || !e.contains("colour") || !e["vertex"].is_number_unsigned() ||
            !e["colour"].is_number_integer())
            throw FormatError("guard entries need integer \"vertex\" and \"colour\"");
        f.guards.push_back({e["vertex"].get<std::size_t>(), e["colour"].get<ColourId>()});
    }
    if (!j.contains("palette_size") || !j["palette_size"].is_number_unsigned())
        throw FormatError("guarding file needs \"palette_size\"");
    f.palette_size = j["palette_size"].get<std::size_t>();
    if (j.contains("algorithm")) f.algorithm = j["algorithm"].get<std::string>();
    if (j.contains("stats")) f.stats = j["stats"];
    return f;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path);
    out << text;
}

inline void write_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------------------------
// SVG

struct SvgRegion {
    std::vector<Point> ring;
    std::string fill;
};

inline const std::vector<std::string>& svg_palette() {
    static const std::vector<std::string> cycle{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return cycle;
}

inline std::string render_svg(const SimplePolygon& poly, const ColouredGuarding& g,
                              const std::vector<SvgRegion>& shading = {}, double width = 800) {
    double lo_x = std::numeric_limits<double>::max(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
    for (const auto& p : poly.vertices()) {
        lo_x = std::min(lo_x, to_double(p.x));
        hi_x = std::max(hi_x, to_double(p.x));
        lo_y = std::min(lo_y, to_double(p.y));
        hi_y = std::max(hi_y, to_double(p.y));
    }
    const double margin = 20;
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    const double scale = (width - 2 * margin) / span;
    const double height = (hi_y - lo_y) * scale + 2 * margin;
    auto sx = [&](const Point& p) { return margin + (to_double(p.x) - lo_x) * scale; };
    auto sy = [&](const Point& p) { return height - margin - (to_double(p.y) - lo_y) * scale; };
    auto points_attr = [&](const auto& ring) {
        std::ostringstream s;
        for (const auto& p : ring) s << sx(p) << ',' << sy(p) << ' ';
        return s.str();
    };
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    for (const auto& r : shading)
        out << "  <polygon points=\"" << points_attr(r.ring) << "\" fill=\"" << r.fill
            << "\" fill-opacity=\"0.25\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
    out << "  <polygon points=\"" << points_attr(poly.vertices()) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    const auto& pal = svg_palette();
    for (auto [v, c] : g.assignments) {
        const auto& colour = pal[static_cast<std::size_t>(std::abs(c)) % pal.size()];
        out << "  <circle cx=\"" << sx(poly[v]) << "\" cy=\"" << sy(poly[v]) << "\" r=\"6\" fill=\"" << colour << "\"/>\n";
        out << "  <text x=\"" << sx(poly[v]) + 8 << "\" y=\"" << sy(poly[v]) - 8
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << c << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace cfguard
