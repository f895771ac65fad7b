#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cfguard/cfguard.hpp"

using namespace cfguard;

namespace {

enum Exit { kOk = 0, kFail = 1, kInput = 2, kPrecondition = 3, kSampled = 4 };

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const Json& j) {
    if (path.empty() || path == "-") std::cout << j.dump(2) << "\n";
    else write_json_file(path, j);
}

struct Loaded {
    PolygonFile file;
    SimplePolygon poly;
};

Loaded load_polygon(const std::string& path, std::optional<long> base_override) {
    Loaded l;
    l.file = polygon_file_from_json(read_json_file(path));
    l.poly = l.file.polygon();
    if (base_override) {
        if (*base_override < 0 || static_cast<std::size_t>(*base_override) >= l.poly.size())
            throw FormatError("--base out of range");
        auto i = static_cast<std::size_t>(*base_override);
        l.file.base = std::array<std::size_t, 2>{i, (i + 1) % l.poly.size()};
    }
    return l;
}

Json point_json(const Point& p) { return Json::array({rational_to_json(p.x), rational_to_json(p.y)}); }

std::vector<SvgRegion> decomposition_shading(const DecompTree& t) {
    std::vector<SvgRegion> out;
    for (const auto& nd : t.nodes) {
        auto v = nd.region.vertices();
        out.push_back({{v.begin(), v.end()}, nd.kind == NodeKind::FORWARD ? "#f4a261" : "#a8dadc"});
    }
    return out;
}

struct ColourOptions {
    std::string input, mode = "simple", out, svg;
    std::optional<long> base;
};

int cmd_colour(const ColourOptions& o) {
    auto l = load_polygon(o.input, o.base);
    ColouredGuarding g;
    Json stats{{"n", l.poly.size()}};
    std::vector<SvgRegion> shading;
    std::string algorithm;
    if (o.mode == "funnel") {
        auto f = classify_funnel(l.poly);
        if (!f) throw PreconditionError("polygon is not a funnel");
        g = colour_funnel(*f);
        algorithm = "funnel-ruler";
        stats["chain_guards"] = guard_funnel_simple(*f).size();
    } else if (o.mode == "weakvis") {
        auto e = l.file.base_edge(l.poly);
        if (!e) throw PreconditionError("weakvis mode needs a base edge (--base or \"base\" in the file)");
        if (!is_weakly_visible(l.poly, *e)) throw PreconditionError("polygon is not weakly visible from the base");
        auto mfs = max_funnels(l.poly, *e, false);
        g = colour_weak_visibility(l.poly, mfs);
        algorithm = "weak-visibility";
        stats["max_funnels"] = mfs.size();
        stats["colour_bound"] = weak_visibility_colour_bound(l.poly.size(), mfs.size());
    } else if (o.mode == "simple") {
        auto e = l.file.base_edge(l.poly).value_or(0);
        auto res = colour_simple_polygon_detailed(l.poly, e);
        g = res.guarding;
        algorithm = "simple-decomposition";
        stats["nodes"] = res.tree.size();
        stats["weak_colours"] = res.weak_colours;
        stats["forward_colours"] = res.forward_colours;
        stats["dropped_guards"] = res.dropped;
        shading = decomposition_shading(res.tree);
    } else {
        throw FormatError("unknown --mode " + o.mode);
    }
    stats["guards"] = g.assignments.size();
    emit(o.out, to_json(GuardingFile::from_guarding(l.poly, g, algorithm, stats)));
    if (!o.svg.empty()) write_text_file(o.svg, render_svg(l.poly, g, shading));
    return kOk;
}

struct VerifyArgs {
    std::string polygon, guarding, viewers = "points";
    bool exact_only = false;
};

int cmd_verify(const VerifyArgs& a) {
    auto l = load_polygon(a.polygon, std::nullopt);
    auto g = guarding_file_from_json(read_json_file(a.guarding)).guarding(l.poly);
    VerificationReport rep;
    if (a.viewers == "vertices") {
        rep = v2v_verify(l.poly, g);
    } else if (a.viewers == "points") {
        VerifyOptions opt;
        opt.exact_only = a.exact_only;
        try {
            rep = v2p_verify(l.poly, g, opt);
        } catch (const OverlayBudgetExceeded& e) {
            throw PreconditionError(std::string(e.what()) + " (--exact-only forbids sampling)");
        }
    } else {
        throw FormatError("unknown --viewers " + a.viewers);
    }
    std::cout << to_string(rep.verdict);
    if (rep.cells) std::cout << " cells=" << rep.cells;
    std::cout << "\n";
    if (rep.verdict == Verdict::FAIL) {
        if (rep.witness_vertex)
            std::cout << "witness vertex " << l.poly.input_index_to_own(*rep.witness_vertex) << "\n";
        if (rep.witness) std::cout << "witness point " << to_string(rep.witness->x) << " " << to_string(rep.witness->y) << "\n";
        std::cout << "sees guards:";
        for (auto v : rep.census) std::cout << ' ' << l.poly.input_index_to_own(v) << "(colour " << g.assignments.at(v) << ")";
        std::cout << "\n";
        return kFail;
    }
    if (!rep.detail.empty()) std::cout << rep.detail << "\n";
    return rep.verdict == Verdict::OK ? kOk : kSampled;
}

struct GenArgs {
    std::string kind = "simple", out;
    std::uint64_t seed = 1;
    std::size_t n = 12;
};

int cmd_gen(const GenArgs& a) {
    PolygonFile f;
    if (a.kind == "funnel") {
        if (a.n < 3) throw FormatError("--n must be at least 3 for a funnel");
        const std::size_t left = (a.n + 1) / 2, right = a.n + 1 - left;  // apex counted on both chains
        auto fn = random_funnel({a.seed, left, right});
        f = PolygonFile::from_polygon(fn.polygon, fn.left.front());
    } else if (a.kind == "weakvis") {
        auto inst = random_weak_visibility_polygon({.seed = a.seed, .max_n = std::max<std::size_t>(a.n, 8)});
        f = PolygonFile::from_polygon(inst.polygon, inst.base);
    } else if (a.kind == "simple") {
        f = PolygonFile::from_polygon(random_simple_polygon({.seed = a.seed, .n = a.n}));
    } else {
        throw FormatError("unknown --kind " + a.kind);
    }
    f.name = a.kind + "-" + std::to_string(a.seed);
    emit(a.out, to_json(f));
    return kOk;
}

int cmd_gallery(const std::string& name, const std::string& out) {
    const auto& ids = gallery_ids();
    if (std::find(ids.begin(), ids.end(), name) == ids.end()) throw FormatError("unknown gallery name " + name);
    auto P = gallery(name);
    emit(out, to_json(PolygonFile::from_polygon(P, gallery_base(name), name)));
    return kOk;
}

int cmd_decompose(const std::string& input, std::optional<long> base, const std::string& out) {
    auto l = load_polygon(input, base);
    auto t = decompose(l.poly, l.file.base_edge(l.poly).value_or(0));
    Json nodes = Json::array();
    for (std::size_t id = 0; id < t.size(); ++id) {
        const auto& nd = t.nodes[id];
        Json region = Json::array();
        for (const auto& p : nd.region.vertices()) region.push_back(point_json(p));
        Json origin = Json::array();
        for (long o : nd.origin) origin.push_back(o < 0 ? Json(nullptr) : Json(l.poly.input_index_to_own(static_cast<std::size_t>(o))));
        nodes.push_back({{"id", id},
                         {"kind", to_string(nd.kind)},
                         {"side", to_string(nd.side)},
                         {"parent", nd.parent},
                         {"children", nd.children},
                         {"base", Json::array({nd.base, nd.region.next(nd.base)})},
                         {"chain", nd.chain},
                         {"region", region},
                         {"origin", origin}});
    }
    Json j{{"nodes", nodes}, {"violations", decomposition_violations(l.poly, t)}};
    emit(out, j);
    return kOk;
}

int cmd_funnel_guards(const std::string& input, const std::string& out) {
    auto l = load_polygon(input, std::nullopt);
    auto f = classify_funnel(l.poly);
    if (!f) throw PreconditionError("polygon is not a funnel");
    auto to_file = [&](std::vector<std::size_t> gs) {
        Json a = Json::array();
        for (auto v : gs) a.push_back(l.poly.input_index_to_own(v));
        return a;
    };
    Json j{{"simple", to_file(guard_funnel_simple(*f))}, {"optimal", to_file(guard_funnel_optimal(*f))}};
    emit(out, j);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conflict-free chromatic guarding of simple polygons"};
    app.require_subcommand(1);
    bool exact_only = false;
    app.add_flag("--exact-only", exact_only, "Never fall back to sampling in point verification");

    ColourOptions co;
    auto* colour = app.add_subcommand("colour", "Colour a polygon's guards");
    colour->add_option("input", co.input, "Polygon file")->required();
    colour->add_option("--mode", co.mode, "funnel | weakvis | simple")->check(CLI::IsMember({"funnel", "weakvis", "simple"}));
    colour->add_option("--base", co.base, "Base edge index (edge i runs from vertex i to i+1 in file order)");
    colour->add_option("--out", co.out, "Guarding file (default stdout)");
    colour->add_option("--svg", co.svg, "Write an SVG figure");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check a guarding for conflict-freeness");
    verify->add_option("polygon", va.polygon)->required();
    verify->add_option("guarding", va.guarding)->required();
    verify->add_option("--viewers", va.viewers, "points | vertices")->check(CLI::IsMember({"points", "vertices"}));

    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("--kind", ga.kind, "funnel | weakvis | simple")->check(CLI::IsMember({"funnel", "weakvis", "simple"}));
    gen->add_option("--seed", ga.seed);
    gen->add_option("--n", ga.n, "Vertex count (upper bound for weakvis)");
    gen->add_option("--out", ga.out);

    std::string gname, gout;
    auto* gal = app.add_subcommand("gallery", "Write a built-in polygon");
    gal->add_option("--name", gname)->required();
    gal->add_option("--out", gout);

    std::string din, dout;
    std::optional<long> dbase;
    auto* dec = app.add_subcommand("decompose", "Dump the polygon decomposition as JSON");
    dec->add_option("input", din)->required();
    dec->add_option("--base", dbase);
    dec->add_option("--out", dout);

    std::string fin, fout;
    auto* fg = app.add_subcommand("funnel-guards", "Chain guards of a funnel (simple and optimal)");
    fg->add_option("input", fin)->required();
    fg->add_option("--out", fout);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }
    va.exact_only = exact_only;
    try {
        if (*colour) return cmd_colour(co);
        if (*verify) return cmd_verify(va);
        if (*gen) return cmd_gen(ga);
        if (*gal) return cmd_gallery(gname, gout);
        if (*dec) return cmd_decompose(din, dbase, dout);
        if (*fg) return cmd_funnel_guards(fin, fout);
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPrecondition;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPrecondition;
    }
    return kInput;
}
