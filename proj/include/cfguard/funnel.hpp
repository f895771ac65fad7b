#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "cfguard/guarding.hpp"
#include "cfguard/visibility.hpp"

namespace cfguard {

enum class Side { L = 0, R = 1 };

inline Side opposite(Side s) { return s == Side::L ? Side::R : Side::L; }

struct ChainVertex {
    Side side = Side::L;
    std::size_t idx = 0;  // 0-based, bottom-to-top
    friend auto operator<=>(const ChainVertex&, const ChainVertex&) = default;
};

// Point on a chain: chain[edge] + t * (chain[edge+1] - chain[edge]), 0 <= t < 1.
struct ChainPoint {
    Side side = Side::L;
    std::size_t edge = 0;
    Rational t;
    Point p;

    bool at_vertex() const { return t == 0; }
    friend bool position_less(const ChainPoint& a, const ChainPoint& b) {
        return a.edge != b.edge ? a.edge < b.edge : a.t < b.t;
    }
};

enum class CutKind { SEGMENT, VEE };

struct Cut {
    CutKind kind = CutKind::SEGMENT;
    ChainPoint q;  // on L
    ChainPoint p;  // on R
    std::optional<Point> junction;
};

class Funnel {
public:
    SimplePolygon polygon;
    std::vector<std::size_t> left;   // l1..lk, polygon indices
    std::vector<std::size_t> right;  // r1..rm

    std::size_t apex() const { return left.back(); }
    const std::vector<std::size_t>& chain(Side s) const { return s == Side::L ? left : right; }
    std::size_t size(Side s) const { return chain(s).size(); }

    ChainVertex canon(ChainVertex v) const {
        if (v.side == Side::R && v.idx + 1 == right.size()) return {Side::L, left.size() - 1};
        return v;
    }
    bool is_apex(ChainVertex v) const { return v.idx + 1 == chain(v.side).size(); }
    std::size_t index(ChainVertex v) const { return chain(v.side)[v.idx]; }
    const Point& point(ChainVertex v) const { return polygon[index(v)]; }
    const Point& point(Side s, std::size_t i) const { return polygon[chain(s)[i]]; }

    ChainPoint vertex_point(Side s, std::size_t i) const { return {s, i, Rational(0), point(s, i)}; }
    ChainPoint apex_point(Side s) const { return vertex_point(s, size(s) - 1); }

    // Chain vertex of a polygon index (apex reported on L).
    std::optional<ChainVertex> locate(std::size_t poly_index) const {
        for (std::size_t i = 0; i < left.size(); ++i)
            if (left[i] == poly_index) return ChainVertex{Side::L, i};
        for (std::size_t i = 0; i < right.size(); ++i)
            if (right[i] == poly_index) return ChainVertex{Side::R, i};
        return std::nullopt;
    }

    bool cut_includes_apex(const Cut& c) const {
        return c.q.edge + 1 == left.size() || c.p.edge + 1 == right.size();
    }
};

// Base choice for polygons with two adjacent convex pairs: the first pair found scanning from
// vertex 0.
inline std::optional<Funnel> classify_funnel(const SimplePolygon& poly) {
    const std::size_t n = poly.size();
    std::vector<std::size_t> convex;
    for (std::size_t i = 0; i < n; ++i) {
        int o = orient(poly[poly.prev(i)], poly[i], poly[poly.next(i)]);
        if (o > 0) convex.push_back(i);
        else if (o == 0) return std::nullopt;
    }
    if (convex.size() != 3) return std::nullopt;
    for (std::size_t a : convex) {
        std::size_t b = poly.next(a);
        if (std::find(convex.begin(), convex.end(), b) == convex.end()) continue;
        std::size_t apex = SimplePolygon::npos;
        for (std::size_t c : convex)
            if (c != a && c != b) apex = c;
        Funnel f{poly, {}, {}};
        for (std::size_t i = a;; i = poly.prev(i)) {
            f.left.push_back(i);
            if (i == apex) break;
        }
        for (std::size_t i = b;; i = poly.next(i)) {
            f.right.push_back(i);
            if (i == apex) break;
        }
        return f;
    }
    return std::nullopt;
}

inline ChainPoint make_chain_point(const Funnel& f, Side s, std::size_t edge, Rational t) {
    const std::size_t sz = f.size(s);
    if (t == 1 && edge + 1 < sz) {
        ++edge;
        t = 0;
    }
    if (edge + 1 >= sz) return f.apex_point(s);
    Point p = lerp(f.point(s, edge), f.point(s, edge + 1), t);
    return {s, edge, std::move(t), std::move(p)};
}

// Segment from the chain successor of v to where the ray v -> successor meets the other chain.
inline Cut ups(const Funnel& f, ChainVertex v) {
    v = f.canon(v);
    if (f.is_apex(v) || v.idx + 2 == f.size(v.side))
        return {CutKind::SEGMENT, f.apex_point(Side::L), f.apex_point(Side::R), std::nullopt};
    const Side own = v.side, other = opposite(v.side);
    const Point& X = f.point(own, v.idx);
    const Point& Y = f.point(own, v.idx + 1);
    const Point d = Y - X;
    std::optional<std::tuple<Rational, std::size_t, Rational>> best;
    for (std::size_t j = 0; j + 1 < f.size(other); ++j) {
        const Point& c = f.point(other, j);
        if (int side = orient_filtered(X, Y, c); side != 0 && side == orient_filtered(X, Y, f.point(other, j + 1)))
            continue;
        const Point s = f.point(other, j + 1) - c;
        Rational den = cross(d, s);
        if (den == 0) continue;
        Point cx = c - X;
        Rational t = cross(cx, s) / den;
        Rational u = cross(cx, d) / den;
        if (t > 1 && u >= 0 && u <= 1 && (!best || t < std::get<0>(*best))) best.emplace(t, j, u);
    }
    if (!best) throw GeometryError("upper tangent misses the opposite chain");
    ChainPoint own_end = f.vertex_point(own, v.idx + 1);
    ChainPoint far_end = make_chain_point(f, other, std::get<1>(*best), std::get<2>(*best));
    if (own == Side::L) return {CutKind::SEGMENT, own_end, far_end, std::nullopt};
    return {CutKind::SEGMENT, far_end, own_end, std::nullopt};
}

inline Cut ups_pair(const Funnel& f, std::size_t li, std::size_t rj) {
    Cut a = ups(f, {Side::L, li});
    Cut b = ups(f, {Side::R, rj});
    if (f.cut_includes_apex(a)) return a;
    if (f.cut_includes_apex(b)) return b;
    // a runs from l_{i+1} (q) to p on R; b from q' on L to r_{j+1} (p)
    if (segments_intersect(a.q.p, a.p.p, b.q.p, b.p.p) &&
        cross(a.p.p - a.q.p, b.p.p - b.q.p) != 0) {
        Point t = line_intersection(a.q.p, a.p.p, b.q.p, b.p.p);
        return {CutKind::VEE, b.q, a.p, t};
    }
    return position_less(b.q, a.q) ? a : b;
}

struct ChainSegment {
    ChainVertex from, to;
};

inline ChainSegment los(const Funnel& f, ChainVertex v) {
    v = f.canon(v);
    if (v.idx == 0) throw GeometryError("los: vertex on the base");
    Side other = f.is_apex(v) ? Side::R : opposite(v.side);
    for (std::size_t j = 0; j < f.size(other); ++j)
        if (sees(f.polygon, f.point(v), f.point(other, j))) return {v, f.canon({other, j})};
    throw GeometryError("los: no visible vertex on the opposite chain");
}

namespace detail {

inline bool sees_cut(const Funnel& f, const Point& g, const Cut& s) {
    if (!sees(f.polygon, g, s.q.p) || !sees(f.polygon, g, s.p.p)) return false;
    return !s.junction || sees(f.polygon, g, *s.junction);
}

// Node key: one or two chain vertices. The sink sorts after everything.
using NodeKey = std::vector<ChainVertex>;

struct GuardGraph {
    std::vector<NodeKey> keys;  // 0 = source, 1 = sink
    std::vector<std::vector<std::pair<std::size_t, int>>> out;
    std::map<NodeKey, std::size_t> ids;

    GuardGraph() {
        keys = {{}, {}};
        out.resize(2);
    }
    std::pair<std::size_t, bool> node(const NodeKey& k) {
        auto it = ids.find(k);
        if (it != ids.end()) return {it->second, false};
        std::size_t id = keys.size();
        keys.push_back(k);
        out.emplace_back();
        ids.emplace(k, id);
        return {id, true};
    }
    void edge(std::size_t a, std::size_t b, int w) {
        for (auto& [t, ww] : out[a])
            if (t == b) return;
        out[a].emplace_back(b, w);
    }

    // Minimum-weight source->sink path; ties broken by the lexicographically smallest key
    // sequence.
    std::vector<std::size_t> best_path() const {
        const std::size_t n = keys.size();
        const long inf = std::numeric_limits<long>::max() / 4;
        std::vector<long> dist(n, inf);  // to sink
        dist[1] = 0;
        for (std::size_t round = 0; round < n; ++round) {  // Bellman-Ford on a tiny DAG-like graph
            bool changed = false;
            for (std::size_t a = 0; a < n; ++a)
                for (auto& [b, w] : out[a])
                    if (dist[b] < inf && dist[b] + w < dist[a]) {
                        dist[a] = dist[b] + w;
                        changed = true;
                    }
            if (!changed) break;
        }
        if (dist[0] >= inf) throw GeometryError("guard graph: sink unreachable");
        std::vector<std::size_t> path;
        std::size_t cur = 0;
        while (cur != 1) {
            std::optional<std::size_t> pick;
            for (auto& [b, w] : out[cur]) {
                if (dist[b] >= inf || dist[b] + w != dist[cur]) continue;
                if (!pick || (b != 1 && (*pick == 1 || keys[b] < keys[*pick]))) pick = b;
            }
            cur = *pick;
            if (cur != 1) path.push_back(cur);
        }
        return path;
    }
};

// i' and j' of the simple step for cut s.
inline std::pair<ChainVertex, ChainVertex> simple_step(const Funnel& f, const Cut& s) {
    std::size_t i = s.q.edge, j = s.p.edge;
    if (i + 1 < f.left.size() && sees_cut(f, f.point(Side::L, i + 1), s)) ++i;
    if (j + 1 < f.right.size() && sees_cut(f, f.point(Side::R, j + 1), s)) ++j;
    return {f.canon({Side::L, i}), f.canon({Side::R, j})};
}

inline GuardGraph build_guard_graph(const Funnel& f, bool with_pairs) {
    GuardGraph g;
    std::map<std::size_t, Cut> cut_of;
    cut_of[0] = Cut{CutKind::SEGMENT, f.vertex_point(Side::L, 0), f.vertex_point(Side::R, 0), std::nullopt};
    std::deque<std::size_t> work{0};
    auto visit = [&](std::size_t t, const NodeKey& key, int w) {
        auto [id, fresh] = g.node(key);
        g.edge(t, id, w);
        if (!fresh) return;
        Cut c = key.size() == 1 ? ups(f, key[0]) : ups_pair(f, key[0].idx, key[1].idx);
        if (f.cut_includes_apex(c)) g.edge(id, 1, 0);
        else {
            cut_of[id] = c;
            work.push_back(id);
        }
    };
    while (!work.empty()) {
        std::size_t t = work.front();
        work.pop_front();
        const Cut s = cut_of.at(t);
        auto [zl, zr] = simple_step(f, s);
        visit(t, {zl}, 1);
        visit(t, {zr}, 1);
        if (!with_pairs) continue;
        // largest L index strictly below the tangent line of p's R edge, and symmetrically
        const std::size_t pe = s.p.edge, qe = s.q.edge;
        if (pe + 1 >= f.right.size() || qe + 1 >= f.left.size()) continue;
        std::optional<std::size_t> ii, jj;
        for (std::size_t a = 0; a + 1 < f.left.size(); ++a)
            if (orient(f.point(Side::R, pe), f.point(Side::R, pe + 1), f.point(Side::L, a)) > 0) ii = a;
        for (std::size_t b = 0; b + 1 < f.right.size(); ++b)
            if (orient(f.point(Side::L, qe), f.point(Side::L, qe + 1), f.point(Side::R, b)) < 0) jj = b;
        if (ii && jj) visit(t, {ChainVertex{Side::L, *ii}, ChainVertex{Side::R, *jj}}, 2);
    }
    return g;
}

inline std::vector<std::size_t> run_guard_graph(const Funnel& f, bool with_pairs) {
    GuardGraph g = build_guard_graph(f, with_pairs);
    std::vector<std::size_t> guards;
    for (std::size_t id : g.best_path())
        for (const ChainVertex& v : g.keys[id]) guards.push_back(f.index(v));
    return guards;
}

}  // namespace detail

// Guards bottom-up (polygon indices).
inline std::vector<std::size_t> guard_funnel_simple(const Funnel& f) { return detail::run_guard_graph(f, false); }

inline std::vector<std::size_t> guard_funnel_optimal(const Funnel& f) { return detail::run_guard_graph(f, true); }

inline ColouredGuarding colour_funnel(const Funnel& f) {
    ColouredGuarding g;
    auto guards = guard_funnel_simple(f);
    for (std::size_t i = 0; i < guards.size(); ++i) g.assignments[guards[i]] = ruler(i + 1);
    return g;
}

inline int colour_lower_bound(std::uint64_t m) {
    if (m < 1) throw GeometryError("colour_lower_bound needs m >= 1");
    return floor_log2(m + 3) - 3;
}

// Region between s1 (base, or ups of `lower`) and s2 (apex, or los of `upper`).
struct Interval {
    std::optional<ChainVertex> lower;
    std::optional<ChainVertex> upper;
};

inline Cut interval_lower_cut(const Funnel& f, const Interval& q) {
    if (!q.lower) return {CutKind::SEGMENT, f.vertex_point(Side::L, 0), f.vertex_point(Side::R, 0), std::nullopt};
    return ups(f, *q.lower);
}

namespace detail {

inline bool at_or_above(const ChainPoint& a, std::size_t idx) {
    return idx > a.edge || (idx == a.edge && a.t == 0);
}

// Highest index on side s still inside the interval, or nullopt when s2 is the apex.
inline std::optional<std::pair<std::size_t, bool>> upper_limit(const Funnel& f, const Interval& q, Side s) {
    if (!q.upper) return std::nullopt;
    ChainSegment seg = los(f, *q.upper);
    // own end excluded, z included
    if (seg.from.side == s || f.is_apex(seg.from)) {
        if (seg.from.side == s) return std::pair<std::size_t, bool>{seg.from.idx, false};
    }
    if (seg.to.side == s) return std::pair<std::size_t, bool>{seg.to.idx, true};
    if (f.is_apex(seg.to)) return std::pair<std::size_t, bool>{f.size(s) - 1, true};
    // the other end sits on the opposite chain: limit on s is the apex exclusive of nothing
    return std::pair<std::size_t, bool>{f.size(s) - 1, true};
}

}  // namespace detail

// Vertices of the interval, apex reported on L.
inline std::vector<ChainVertex> interval_vertices(const Funnel& f, const Interval& q) {
    Cut s1 = interval_lower_cut(f, q);
    if (f.cut_includes_apex(s1)) return {};
    std::vector<ChainVertex> out;
    for (Side s : {Side::L, Side::R}) {
        const ChainPoint& lo = s == Side::L ? s1.q : s1.p;
        auto lim = detail::upper_limit(f, q, s);
        for (std::size_t i = 0; i < f.size(s); ++i) {
            if (!detail::at_or_above(lo, i)) continue;
            if (lim && (i > lim->first || (i == lim->first && !lim->second))) continue;
            ChainVertex v = f.canon({s, i});
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<ChainVertex> shadow_vertices(const Funnel& f, const Interval& q) {
    if (!q.lower) return {};
    Cut s1 = ups(f, *q.lower);
    if (f.cut_includes_apex(s1)) return {};
    ChainVertex succ = f.canon({q.lower->side, q.lower->idx + 1});
    ChainSegment bottom = los(f, succ);
    Side other = opposite(q.lower->side);
    const ChainPoint& far_end = other == Side::L ? s1.q : s1.p;
    std::vector<ChainVertex> out;
    if (bottom.to.side != other && !f.is_apex(bottom.to)) return out;
    for (std::size_t i = f.is_apex(bottom.to) ? f.size(other) - 1 : bottom.to.idx; i < f.size(other); ++i)
        if (!detail::at_or_above(far_end, i)) out.push_back(f.canon({other, i}));
    return out;
}

inline std::size_t interval_guard_count(const Funnel& f, const Interval& q, const std::vector<std::size_t>& guards) {
    std::size_t c = 0;
    for (const ChainVertex& v : interval_vertices(f, q))
        if (std::find(guards.begin(), guards.end(), f.index(v)) != guards.end()) ++c;
    return c;
}

// s2 strictly above s1 on both chains.
inline bool interval_is_valid(const Funnel& f, const Interval& q) {
    if (q.lower && (f.is_apex(f.canon(*q.lower)) || q.lower->idx + 2 >= f.size(q.lower->side))) return false;
    if (q.upper && f.canon(*q.upper).idx == 0) return false;
    if (!q.upper) return true;
    Cut s1 = interval_lower_cut(f, q);
    ChainSegment s2 = los(f, *q.upper);
    for (const ChainVertex& end : {s2.from, s2.to}) {
        for (Side s : {Side::L, Side::R}) {
            ChainVertex e = end;
            if (f.is_apex(e)) e = {s, f.size(s) - 1};
            if (e.side != s) continue;
            const ChainPoint& lo = s == Side::L ? s1.q : s1.p;
            bool above = e.idx > lo.edge;
            if (!above) return false;
        }
    }
    return true;
}

// A point of the interval that sees its vertices and nothing outside the interval and shadow.
// The crossing of lot(q) with s1 is moved into the open cell of the arrangement of lines through
// vertex pairs that lies above s1 and on the blocking side of lot(q).
inline Point interval_observer(const Funnel& f, const Interval& q) {
    if (!q.upper) throw GeometryError("observer undefined when the interval reaches the apex");
    Cut s1 = interval_lower_cut(f, q);
    ChainSegment s2 = los(f, *q.upper);
    const Point& qa = f.point(s2.from);
    const Point& za = f.point(s2.to);
    const Point& a = s1.q.p;
    const Point& b = s1.p.p;
    if (cross(b - a, za - qa) == 0) throw GeometryError("observer: lot parallel to s1");
    Point o0 = line_intersection(a, b, qa, za);
    int side1 = orient(a, b, qa);
    // blocking side: where z's chain neighbours lie
    ChainVertex z = s2.to;
    Side zs = f.is_apex(z) ? (f.is_apex(s2.from) ? Side::R : opposite(s2.from.side)) : z.side;
    std::size_t zi = f.is_apex(z) ? f.size(zs) - 1 : z.idx;
    int side2 = 0;
    if (zi > 0) side2 = orient(qa, za, f.point(zs, zi - 1));
    if (side2 == 0 && zi + 1 < f.size(zs)) side2 = orient(qa, za, f.point(zs, zi + 1));
    if (side1 == 0 || side2 == 0) throw GeometryError("observer: degenerate configuration");
    const Point u1 = b - a, u2 = za - qa;
    int sigma1 = side2 * sgn(cross(u2, u1));
    int sigma2 = side1 * sgn(cross(u1, u2));
    Point d = Rational(sigma1) * u1 + Rational(sigma2) * u2;
    std::optional<Rational> tmin;
    const auto verts = f.polygon.vertices();
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            Point e = verts[j] - verts[i];
            Rational off = cross(e, o0 - verts[i]);
            Rational rate = cross(e, d);
            if (off == 0 || rate == 0) continue;
            Rational t = -off / rate;
            if (t > 0 && (!tmin || t < *tmin)) tmin = t;
        }
    Rational step = tmin ? *tmin / 2 : Rational(1, 2);
    return o0 + step * d;
}

inline std::pair<Interval, Interval> interval_sections(const Funnel& f, const Interval& q, ChainVertex p) {
    p = f.canon(p);
    return {Interval{q.lower, p}, Interval{p, q.upper}};
}

}  // namespace cfguard
