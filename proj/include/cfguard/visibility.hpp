#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "cfguard/polygon.hpp"

namespace cfguard {

// Segment ab lies in the closed polygon.
inline bool sees(const SimplePolygon& poly, const Point& a, const Point& b) {
    if (poly.locate(a) == Location::EXTERIOR || poly.locate(b) == Location::EXTERIOR)
        throw GeometryError("sees: endpoint outside polygon");
    if (a == b) return true;
    std::vector<Rational> ts{Rational(0), Rational(1)};
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) segment_hits(a, b, poly[i], poly[poly.next(i)], ts);
    sort_unique(ts);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        Rational mid = (ts[k] + ts[k + 1]) / 2;
        if (poly.locate(lerp(a, b, mid)) == Location::EXTERIOR) return false;
    }
    return true;
}

inline bool sees(const SimplePolygon& poly, std::size_t i, std::size_t j) {
    return sees(poly, poly[i], poly[j]);
}

// Farthest point of the ray from o through w such that the whole segment from o stays in the
// polygon. Precondition: o sees w, o != w.
inline Point ray_exit(const SimplePolygon& poly, const Point& o, const Point& w) {
    const Point d = w - o;
    std::vector<Rational> ts{Rational(1)};
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& c = poly[i];
        const Point& e = poly[poly.next(i)];
        Point s = e - c;
        Rational den = cross(d, s);
        Point co = c - o;
        if (den != 0) {
            Rational t = cross(co, s) / den;
            Rational u = cross(co, d) / den;
            if (t >= 1 && u >= 0 && u <= 1) ts.push_back(std::move(t));
        } else if (cross(co, d) == 0) {
            Rational dd = dot(d, d);
            Rational tc = dot(co, d) / dd, te = dot(e - o, d) / dd;
            if (tc >= 1) ts.push_back(tc);
            if (te >= 1) ts.push_back(te);
        }
    }
    sort_unique(ts);
    Rational cur = 1;
    for (std::size_t k = 1; k < ts.size(); ++k) {
        Rational mid = (cur + ts[k]) / 2;
        if (poly.locate(o + mid * d) == Location::EXTERIOR) break;
        cur = ts[k];
    }
    return o + cur * d;
}

// Polygon plus the origin of each vertex: index into the host polygon or -1 for points that
// are not host vertices.
struct LabelledPolygon {
    SimplePolygon poly;
    std::vector<long> origin;
};

inline std::vector<long> origin_labels(const SimplePolygon& host, std::span<const Point> pts) {
    std::vector<long> out;
    out.reserve(pts.size());
    for (const Point& p : pts) {
        std::size_t k = host.find_vertex(p);
        out.push_back(k == SimplePolygon::npos ? -1 : static_cast<long>(k));
    }
    return out;
}

namespace detail {

// Removes repeated points and zero-width spikes from a closed point sequence.
inline std::vector<Point> clean_ring(std::vector<Point> ring) {
    bool changed = true;
    while (changed && ring.size() >= 3) {
        changed = false;
        std::vector<Point> out;
        for (std::size_t i = 0; i < ring.size(); ++i)
            if (out.empty() || !(out.back() == ring[i])) out.push_back(ring[i]);
        while (out.size() > 1 && out.back() == out.front()) out.pop_back();
        if (out.size() != ring.size()) changed = true;
        ring = std::move(out);
        const std::size_t n = ring.size();
        if (n < 3) break;
        for (std::size_t i = 0; i < n; ++i) {
            const Point& p = ring[(i + n - 1) % n];
            const Point& c = ring[i];
            const Point& q = ring[(i + 1) % n];
            if (orient(p, c, q) == 0 && dot(c - p, q - c) <= 0) {
                ring.erase(ring.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
        }
    }
    return ring;
}

// Walks the host boundary counter-clockwise from vertex start, emitting the visible pieces of
// each edge. Candidate breakpoints per edge must contain every piece endpoint.
inline std::vector<Point> walk_visible_pieces(const SimplePolygon& host, std::size_t start,
                                              const std::vector<std::vector<Point>>& extra,
                                              const std::function<bool(const Point&)>& visible) {
    const std::size_t n = host.size();
    std::vector<Point> ring;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t i = (start + step) % n;
        const Point& a = host[i];
        const Point& b = host[host.next(i)];
        std::vector<Rational> ts{Rational(0), Rational(1)};
        for (const Point& p : extra[i]) ts.push_back(param_on(p, a, b));
        sort_unique(ts);
        std::vector<bool> vis(ts.size());
        for (std::size_t k = 0; k < ts.size(); ++k) vis[k] = visible(lerp(a, b, ts[k]));
        std::size_t k = 0;
        while (k < ts.size()) {
            if (!vis[k]) {
                ++k;
                continue;
            }
            std::size_t e = k;
            while (e + 1 < ts.size() && vis[e + 1] && visible(lerp(a, b, (ts[e] + ts[e + 1]) / 2))) ++e;
            ring.push_back(lerp(a, b, ts[k]));
            if (e != k) ring.push_back(lerp(a, b, ts[e]));
            k = e + 1;
        }
    }
    return clean_ring(std::move(ring));
}

inline std::vector<std::vector<Point>> bucket_by_edge(const SimplePolygon& host,
                                                      const std::vector<Point>& pts) {
    std::vector<std::vector<Point>> extra(host.size());
    for (const Point& z : pts)
        for (std::size_t i = 0; i < host.size(); ++i)
            if (in_segment_interior(z, host[i], host[host.next(i)])) extra[i].push_back(z);
    return extra;
}

}  // namespace detail

// Visibility polygon of an arbitrary point in the polygon; the ring starts at the point's
// position when it is a vertex.
inline LabelledPolygon visibility_polygon_point(const SimplePolygon& poly, const Point& src) {
    const std::size_t n = poly.size();
    std::vector<Point> landings;
    for (std::size_t w = 0; w < n; ++w) {
        if (poly[w] == src || !sees(poly, src, poly[w])) continue;
        Point z = ray_exit(poly, src, poly[w]);
        if (!(z == poly[w])) landings.push_back(std::move(z));
    }
    std::size_t start = poly.find_vertex(src);
    if (start == SimplePolygon::npos) start = 0;
    auto ring = detail::walk_visible_pieces(poly, start, detail::bucket_by_edge(poly, landings),
                                            [&](const Point& p) { return sees(poly, src, p); });
    SimplePolygon out(ring, {.allow_collinear = true, .normalise = false});
    auto labels = origin_labels(poly, out.vertices());
    return {std::move(out), std::move(labels)};
}

inline SimplePolygon visibility_polygon_vertex(const SimplePolygon& poly, std::size_t v) {
    return visibility_polygon_point(poly, poly[v]).poly;
}

// Extreme parameters (along edge e, 0 at its start) of the points of e that y sees.
struct EdgeSight {
    Rational lo, hi;
};

namespace detail {

struct Linear {  // a + b s
    Rational a, b;
};

// Closed interval list within [0,1].
using Pieces = std::vector<std::pair<Rational, Rational>>;

inline std::optional<std::pair<Rational, Rational>> nonneg_range(const Linear& f) {
    if (f.b == 0) {
        if (f.a >= 0) return std::pair<Rational, Rational>{0, 1};
        return std::nullopt;
    }
    Rational root = -f.a / f.b;
    Rational lo = 0, hi = 1;
    if (f.b > 0) lo = std::max(lo, root);
    else hi = std::min(hi, root);
    if (lo > hi) return std::nullopt;
    return std::pair<Rational, Rational>{lo, hi};
}

// Open set {s : f(s) > 0} clamped to (-1, 2).
inline std::optional<std::pair<Rational, Rational>> positive_range(const Linear& f) {
    if (f.b == 0) {
        if (f.a > 0) return std::pair<Rational, Rational>{-1, 2};
        return std::nullopt;
    }
    Rational root = -f.a / f.b;
    if (f.b > 0) return std::pair<Rational, Rational>{std::max(Rational(-1), root), 2};
    return std::pair<Rational, Rational>{-1, std::min(Rational(2), root)};
}

inline Linear negate(const Linear& f) { return {-f.a, -f.b}; }

inline void subtract_open(Pieces& set, const Rational& l, const Rational& r) {
    if (!(l < r)) return;
    Pieces out;
    for (auto& [a, b] : set) {
        if (a <= l) out.emplace_back(a, std::min(b, l));
        if (r <= b) out.emplace_back(std::max(a, r), b);
    }
    set = std::move(out);
}

inline void intersect_open(std::optional<std::pair<Rational, Rational>>& acc,
                           const std::optional<std::pair<Rational, Rational>>& other) {
    if (!acc || !other) {
        acc.reset();
        return;
    }
    acc->first = std::max(acc->first, other->first);
    acc->second = std::min(acc->second, other->second);
    if (!(acc->first < acc->second)) acc.reset();
}

}  // namespace detail

// Which part of edge e = (A,B) the point y sees. Returns the extreme parameters of the seen set.
inline std::optional<EdgeSight> edge_sight(const SimplePolygon& poly, std::size_t e, const Point& y) {
    using detail::Linear;
    const Point& A = poly[e];
    const Point& B = poly[poly.next(e)];
    if (on_segment(y, A, B)) return EdgeSight{0, 1};
    const int side = orient(A, B, y);
    if (side == 0) {
        const Point& near = dot(y - A, B - A) < 0 ? A : B;
        if (sees(poly, y, near)) return EdgeSight{0, 1};
        return std::nullopt;
    }
    if (side < 0) {
        bool sa = sees(poly, y, A), sb = sees(poly, y, B);
        if (!sa && !sb) return std::nullopt;
        return EdgeSight{sa ? Rational(0) : Rational(1), sb ? Rational(1) : Rational(0)};
    }
    const Point AY = A - y;
    const Point BA = B - A;
    // d(s) = AY + s*BA is the sight direction to the point at parameter s.
    auto cross_with = [&](const Point& w) {  // cross(w, d(s))
        return Linear{cross(w, AY), cross(w, BA)};
    };
    detail::Pieces allowed{{Rational(0), Rational(1)}};
    const std::size_t n = poly.size();
    std::size_t at_vertex = poly.find_vertex(y);
    std::size_t at_edge = at_vertex == SimplePolygon::npos ? poly.find_edge(y) : SimplePolygon::npos;
    if (at_vertex != SimplePolygon::npos) {
        const Point nx = poly[poly.next(at_vertex)] - y;
        const Point pv = poly[poly.prev(at_vertex)] - y;
        auto r1 = detail::nonneg_range(cross_with(nx));
        auto r2 = detail::nonneg_range(detail::negate(cross_with(pv)));
        int turn = orient(poly[poly.prev(at_vertex)], y, poly[poly.next(at_vertex)]);
        detail::Pieces next;
        if (turn > 0) {
            if (r1 && r2) {
                Rational lo = std::max(r1->first, r2->first), hi = std::min(r1->second, r2->second);
                if (lo <= hi) next.emplace_back(lo, hi);
            }
        } else if (turn < 0) {
            if (r1) next.push_back(*r1);
            if (r2) next.push_back(*r2);
        } else if (r1) {
            next.push_back(*r1);
        }
        allowed = std::move(next);
    } else if (at_edge != SimplePolygon::npos) {
        auto r = detail::nonneg_range(cross_with(poly[poly.next(at_edge)] - poly[at_edge]));
        allowed.clear();
        if (r) allowed.push_back(*r);
    }
    for (std::size_t i = 0; i < n && !allowed.empty(); ++i) {
        if (i == e) continue;
        const Point& p = poly[i];
        const Point& q = poly[poly.next(i)];
        const int gy = orient(p, q, y);
        if (gy == 0) continue;
        const Point qp = q - p;
        Linear h{cross(qp, A - p), cross(qp, BA)};  // orient(p, q, x(s))
        if (gy > 0) h = detail::negate(h);
        auto far_side = detail::positive_range(h);
        if (!far_side) continue;
        // fp(s) = cross(d(s), p - y)
        Linear fp = detail::negate(cross_with(p - y));
        Linear fq = detail::negate(cross_with(q - y));
        for (int flip = 0; flip < 2; ++flip) {
            auto acc = far_side;
            detail::intersect_open(acc, detail::positive_range(flip ? detail::negate(fp) : fp));
            detail::intersect_open(acc, detail::positive_range(flip ? fq : detail::negate(fq)));
            if (acc) detail::subtract_open(allowed, acc->first, acc->second);
        }
    }
    std::optional<EdgeSight> out;
    for (auto& [lo, hi] : allowed) {
        if (lo > hi) continue;
        if (lo == hi && !sees(poly, y, lerp(A, B, lo))) continue;
        if (!out) out = EdgeSight{lo, hi};
        else {
            out->lo = std::min(out->lo, lo);
            out->hi = std::max(out->hi, hi);
        }
    }
    return out;
}

inline bool weakly_sees_edge(const SimplePolygon& poly, std::size_t e, const Point& y) {
    return edge_sight(poly, e, y).has_value();
}

// Weak visibility polygon of edge e; the ring starts with e.
inline LabelledPolygon visibility_polygon_edge_labelled(const SimplePolygon& poly, std::size_t e) {
    const std::size_t n = poly.size();
    const Point& A = poly[e];
    const Point& B = poly[poly.next(e)];
    std::vector<Point> landings;
    for (std::size_t w = 0; w < n; ++w) {
        auto sight = edge_sight(poly, e, poly[w]);
        if (!sight) continue;
        for (const Rational* s : {&sight->lo, &sight->hi}) {
            Point x = lerp(A, B, *s);
            if (x == poly[w]) continue;
            Point z = ray_exit(poly, x, poly[w]);
            if (!(z == poly[w])) landings.push_back(std::move(z));
        }
    }
    auto ring = detail::walk_visible_pieces(poly, e, detail::bucket_by_edge(poly, landings),
                                            [&](const Point& p) { return weakly_sees_edge(poly, e, p); });
    SimplePolygon out(ring, {.allow_collinear = true, .normalise = false});
    auto labels = origin_labels(poly, out.vertices());
    return {std::move(out), std::move(labels)};
}

inline SimplePolygon visibility_polygon_edge(const SimplePolygon& poly, std::size_t e) {
    return visibility_polygon_edge_labelled(poly, e).poly;
}

inline bool is_weakly_visible(const SimplePolygon& poly, std::size_t e) {
    return visibility_polygon_edge(poly, e).area2() == poly.area2();
}

}  // namespace cfguard
