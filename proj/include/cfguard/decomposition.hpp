#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "cfguard/geodesic.hpp"
#include "cfguard/guarding.hpp"
#include "cfguard/visibility.hpp"
#include "cfguard/weak_visibility.hpp"

namespace cfguard {

enum class NodeKind { ORDINARY, FORWARD };
enum class ChildSide { ROOT, LEFT, RIGHT };

inline const char* to_string(NodeKind k) { return k == NodeKind::ORDINARY ? "ordinary" : "forward"; }
inline const char* to_string(ChildSide s) {
    switch (s) {
        case ChildSide::ROOT: return "root";
        case ChildSide::LEFT: return "left";
        case ChildSide::RIGHT: return "right";
    }
    return "?";
}

struct DecompNode {
    NodeKind kind = NodeKind::ORDINARY;
    SimplePolygon region;             // CCW; may contain points that are not vertices of P
    std::size_t base = 0;             // edge index in region
    std::vector<long> origin;         // per region vertex: index in P or -1
    std::vector<std::size_t> chain;   // forward nodes: region indices of the non-base chain, y..x
    SimplePolygon host;               // the part of P this node was carved from
    long parent = -1;
    std::vector<std::size_t> children;
    ChildSide side = ChildSide::ROOT;

    const Point& base_start() const { return region[base]; }
    const Point& base_end() const { return region[region.next(base)]; }
};

struct DecompTree {
    std::vector<DecompNode> nodes;  // BFS order, root first
    const DecompNode& root() const { return nodes.front(); }
    std::size_t size() const { return nodes.size(); }
};

namespace detail {

inline std::size_t edge_index_of(const SimplePolygon& poly, const Point& a, const Point& b) {
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (poly[i] == a && poly[poly.next(i)] == b) return i;
    throw GeometryError("decompose: edge not found in ring");
}

inline bool on_boundary(const SimplePolygon& poly, const Point& p) { return poly.find_edge(p) != SimplePolygon::npos; }

// The part of host across edge (a,b) of a CCW subregion: a, then the host boundary walked
// counter-clockwise from a up to b. Returns the polygon and the index of its edge (b,a).
inline std::pair<SimplePolygon, std::size_t> pocket(const SimplePolygon& host, const Point& a, const Point& b) {
    const std::size_t n = host.size();
    std::size_t i = host.find_edge(a);
    if (i == SimplePolygon::npos) throw GeometryError("decompose: cut endpoint off the host boundary");
    Rational ta = param_on(a, host[i], host[host.next(i)]);
    std::vector<Point> ring{a};
    bool closed = false;
    for (std::size_t s = 0; s <= n && !closed; ++s) {
        std::size_t k = (i + s) % n;
        const Point& p = host[k];
        const Point& q = host[host.next(k)];
        if (on_segment(b, p, q) && (s > 0 || param_on(b, p, q) > ta)) {
            ring.push_back(b);
            closed = true;
        } else {
            ring.push_back(q);
        }
    }
    if (!closed) throw GeometryError("decompose: unreachable pocket");
    ring = clean_ring(std::move(ring));
    SimplePolygon poly(std::move(ring), {.allow_collinear = true, .normalise = false});
    return {poly, edge_index_of(poly, b, a)};
}

inline std::vector<long> p_labels(const SimplePolygon& P, const SimplePolygon& region) {
    return origin_labels(P, region.vertices());
}

}  // namespace detail

// Side of the child across cut (a,b), an edge of the ordinary node w (CCW ring order). The cut
// is directed away from the base: its supporting line meets the closed base (cuts of an edge
// visibility polygon are sight lines from the base), and it runs from the end nearer that
// meeting point. When w lies above its base this is the direction of increasing height.
inline ChildSide classify_side(const DecompNode& w, const Point& a, const Point& b) {
    if (w.kind != NodeKind::ORDINARY) throw GeometryError("classify_side: parent is not ordinary");
    const Point& s0 = w.base_start();
    const Point& s1 = w.base_end();
    Point dir = b - a;
    Rational ta, tb;
    if (cross(dir, s1 - s0) == 0) {
        if (orient(s0, s1, a) != 0) throw GeometryError("classify_side: cut is parallel to the base");
        // collinear with the base: measure from the base midpoint
        Point m = midpoint(s0, s1);
        ta = dot(a - m, dir);
        tb = dot(b - m, dir);
        if (sign(ta) * sign(tb) < 0) throw GeometryError("classify_side: cut overlaps the base");
    } else {
        Point s = line_intersection(a, b, s0, s1);
        ta = dot(a - s, dir);
        tb = dot(b - s, dir);
        if (sign(ta) * sign(tb) < 0) throw GeometryError("classify_side: cut straddles the base line");
    }
    // the child lies to the right of a->b
    bool away_is_ab = abs(ta) < abs(tb);
    return away_is_ab ? ChildSide::RIGHT : ChildSide::LEFT;
}

inline ChildSide classify_side(const DecompTree& t, std::size_t child) {
    const DecompNode& c = t.nodes[child];
    if (c.parent < 0) return ChildSide::ROOT;
    const DecompNode& w = t.nodes[static_cast<std::size_t>(c.parent)];
    if (w.kind == NodeKind::FORWARD) return w.side;
    return classify_side(w, c.base_end(), c.base_start());
}

inline DecompTree decompose(const SimplePolygon& P, std::size_t e0 = 0) {
    if (e0 >= P.size()) throw GeometryError("decompose: edge index out of range");
    DecompTree t;
    auto add = [&](NodeKind kind, SimplePolygon region, const Point& s, const Point& e, SimplePolygon host, long parent) {
        DecompNode nd;
        nd.kind = kind;
        nd.base = detail::edge_index_of(region, s, e);
        nd.origin = detail::p_labels(P, region);
        nd.region = std::move(region);
        nd.host = std::move(host);
        nd.parent = parent;
        t.nodes.push_back(std::move(nd));
        std::size_t id = t.nodes.size() - 1;
        if (parent >= 0) t.nodes[static_cast<std::size_t>(parent)].children.push_back(id);
        return id;
    };
    add(NodeKind::ORDINARY, visibility_polygon_edge(P, e0), P[e0], P[P.next(e0)], P, -1);

    auto is_p_vertex = [&](const Point& p) { return P.find_vertex(p) != SimplePolygon::npos; };

    for (std::size_t id = 0; id < t.nodes.size(); ++id) {
        // copies: push_back below may reallocate
        const NodeKind kind = t.nodes[id].kind;
        const SimplePolygon region = t.nodes[id].region;
        const SimplePolygon host = t.nodes[id].host;
        const std::size_t base = t.nodes[id].base;
        if (kind == NodeKind::FORWARD) {
            const auto chain = t.nodes[id].chain;
            for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
                const Point& a = region[chain[k]];
                const Point& b = region[chain[k + 1]];
                if (detail::on_boundary(host, midpoint(a, b))) continue;
                auto [pk, pe] = detail::pocket(host, a, b);
                auto vp = visibility_polygon_edge(pk, pe);
                std::size_t c = add(NodeKind::ORDINARY, std::move(vp), pk[pe], pk[pk.next(pe)], pk, static_cast<long>(id));
                t.nodes[c].side = t.nodes[id].side;
            }
            continue;
        }
        for (std::size_t k = 0; k < region.size(); ++k) {
            if (k == base) continue;
            const Point& a = region[k];
            const Point& b = region[region.next(k)];
            if (detail::on_boundary(host, midpoint(a, b))) continue;
            ChildSide side = classify_side(t.nodes[id], a, b);
            auto [pk, pe] = detail::pocket(host, a, b);
            const Point& u = pk[pe];
            const Point& v = pk[pk.next(pe)];
            auto U = visibility_polygon_edge(pk, pe);
            std::size_t c;
            if (is_p_vertex(u) && is_p_vertex(v)) {
                c = add(NodeKind::ORDINARY, std::move(U), u, v, pk, static_cast<long>(id));
            } else {
                std::size_t ub = detail::edge_index_of(U, u, v);
                const Point y = U[U.next(U.next(ub))];
                const Point x = U[U.prev(ub)];
                std::vector<Point> ring{u, v};
                auto path = with_pass_through_vertices(U, geodesic(U, y, x));
                for (auto& p : path.points) ring.push_back(p);
                ring = detail::clean_ring(std::move(ring));
                SimplePolygon U1(ring, {.allow_collinear = true, .normalise = false});
                c = add(NodeKind::FORWARD, std::move(U1), u, v, pk, static_cast<long>(id));
                auto& nd = t.nodes[c];
                // chain: every region vertex except the base ends, starting after v
                for (std::size_t s = 2; s < nd.region.size(); ++s) nd.chain.push_back((nd.base + s) % nd.region.size());
            }
            t.nodes[c].side = side;
        }
    }

    Rational total = 0;
    for (auto& nd : t.nodes) total += nd.region.area();
    if (total != P.area()) throw GeometryError("decompose: node areas do not sum to the polygon area");
    return t;
}

// Structural checks on a decomposition; returns a description of each violation.
inline std::vector<std::string> decomposition_violations(const SimplePolygon& P, const DecompTree& t) {
    std::vector<std::string> out;
    Rational total = 0;
    for (auto& nd : t.nodes) total += nd.region.area();
    if (total != P.area()) out.push_back("areas do not sum to area(P)");
    for (std::size_t id = 0; id < t.size(); ++id) {
        const auto& nd = t.nodes[id];
        const std::string tag = "node " + std::to_string(id) + ": ";
        if ((id == 0) != (nd.side == ChildSide::ROOT)) out.push_back(tag + "side label");
        if (id > 0 && nd.side != classify_side(t, id)) out.push_back(tag + "side disagrees with classify_side");
        const std::size_t b0 = nd.base, b1 = nd.region.next(nd.base);
        if (nd.kind == NodeKind::ORDINARY) {
            if (nd.origin[b0] < 0 || nd.origin[b1] < 0) out.push_back(tag + "ordinary base end is not a vertex of P");
            MaxFunnelSet mf;
            try {
                mf = max_funnels(nd.region, nd.base, false);
            } catch (const GeometryError& e) {
                out.push_back(tag + e.what());
                continue;
            }
            for (std::size_t w = 0; w < nd.region.size(); ++w) {
                if (nd.origin[w] >= 0) continue;
                bool apex = std::any_of(mf.funnels.begin(), mf.funnels.end(), [&](auto& f) { return f.apex == w; });
                if (!apex) out.push_back(tag + "non-P vertex that is not a max-funnel apex");
            }
        } else {
            for (std::size_t w : nd.chain)
                if (nd.origin[w] < 0) out.push_back(tag + "forward chain vertex is not a vertex of P");
            for (std::size_t k = 1; k + 1 < nd.chain.size(); ++k)
                if (orient(nd.region[nd.chain[k - 1]], nd.region[nd.chain[k]], nd.region[nd.chain[k + 1]]) > 0)
                    out.push_back(tag + "forward chain is not concave");
        }
    }
    return out;
}

struct SimpleColouring {
    ColouredGuarding guarding;
    DecompTree tree;
    int weak_colours = 0;     // C: largest colour id used by the weak visibility colourer
    int forward_colours = 0;  // |B|
    std::size_t dropped = 0;  // guards that would sit on non-P vertices
};

inline SimpleColouring colour_simple_polygon_detailed(const SimplePolygon& P, std::size_t e0 = 0) {
    SimpleColouring out;
    out.tree = decompose(P, e0);
    const auto& nodes = out.tree.nodes;
    std::vector<ColouredGuarding> local(nodes.size());
    int C = 1, chain_max = 0;
    for (std::size_t id = 0; id < nodes.size(); ++id) {
        const auto& nd = nodes[id];
        if (nd.kind == NodeKind::ORDINARY) {
            auto g = colour_weak_visibility(nd.region, max_funnels(nd.region, nd.base, false));
            for (auto& [w, c] : g.assignments) {
                C = std::max(C, c);
                if (nd.origin[w] < 0) {
                    ++out.dropped;
                    continue;
                }
                local[id].assignments[static_cast<std::size_t>(nd.origin[w])] = c;
            }
        } else {
            std::uint64_t k = 0;
            for (std::size_t w : nd.chain) {
                int c = ruler(++k);
                chain_max = std::max(chain_max, c);
                if (nd.origin[w] < 0) {
                    ++out.dropped;
                    continue;
                }
                local[id].assignments[static_cast<std::size_t>(nd.origin[w])] = c;
            }
        }
    }
    const int B = std::max(floor_log2(P.size()), chain_max);
    out.weak_colours = C;
    out.forward_colours = B;

    std::map<std::size_t, ColourId>& result = out.guarding.assignments;
    std::function<void(std::size_t, int)> recurse = [&](std::size_t id, int c) {
        const auto& nd = nodes[id];
        const int offset = (c - 1) * (C + B);
        if (nd.kind == NodeKind::FORWARD) {
            for (std::size_t ch : nd.children) recurse(ch, c);
            for (auto& [w, col] : local[id].assignments) result[w] = offset + C + col;
            return;
        }
        int others[2], k = 0;
        for (int x = 1; x <= 3; ++x)
            if (x != c) others[k++] = x;
        for (std::size_t ch : nd.children) recurse(ch, nodes[ch].side == ChildSide::LEFT ? others[0] : others[1]);
        for (auto& [w, col] : local[id].assignments) result[w] = offset + col;
    };
    recurse(0, 1);
    return out;
}

inline ColouredGuarding colour_simple_polygon(const SimplePolygon& P, std::size_t e0 = 0) {
    return colour_simple_polygon_detailed(P, e0).guarding;
}

}  // namespace cfguard
