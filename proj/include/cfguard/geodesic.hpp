#pragma once

#include <array>
#include <deque>
#include <map>
#include <vector>

#include "cfguard/polygon.hpp"

namespace cfguard {

using Triangle = std::array<std::size_t, 3>;  // CCW vertex indices

inline bool in_closed_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
    return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

// Ear clipping with exact predicates; tolerates straight (180 degree) vertices.
inline std::vector<Triangle> triangulate(const SimplePolygon& poly) {
    std::vector<std::size_t> idx(poly.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<Triangle> tris;
    while (idx.size() > 3) {
        const std::size_t m = idx.size();
        bool clipped = false;
        for (std::size_t k = 0; k < m && !clipped; ++k) {
            std::size_t a = idx[(k + m - 1) % m], b = idx[k], c = idx[(k + 1) % m];
            if (orient(poly[a], poly[b], poly[c]) <= 0) continue;
            bool empty = true;
            for (std::size_t j : idx) {
                if (j == a || j == b || j == c) continue;
                if (in_closed_triangle(poly[j], poly[a], poly[b], poly[c])) {
                    empty = false;
                    break;
                }
            }
            if (!empty) continue;
            tris.push_back({a, b, c});
            idx.erase(idx.begin() + static_cast<long>(k));
            clipped = true;
        }
        if (!clipped) throw GeometryError("triangulation failed: no ear");
    }
    if (orient(poly[idx[0]], poly[idx[1]], poly[idx[2]]) <= 0)
        throw GeometryError("triangulation failed: degenerate final triangle");
    tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

struct PathNode {
    Point p;
    long vertex = -1;  // host vertex index, -1 otherwise
};

struct PolyPath {
    std::vector<Point> points;
};

class Triangulation {
public:
    explicit Triangulation(const SimplePolygon& poly) : poly_(&poly), tris_(triangulate(poly)) {
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_owner;
        adj_.assign(tris_.size(), {});
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            for (int k = 0; k < 3; ++k) {
                std::size_t a = tris_[t][k], b = tris_[t][(k + 1) % 3];
                auto key = std::minmax(a, b);
                auto it = edge_owner.find(key);
                if (it == edge_owner.end()) edge_owner.emplace(key, t);
                else {
                    adj_[t].push_back(it->second);
                    adj_[it->second].push_back(t);
                }
            }
        }
    }

    const std::vector<Triangle>& triangles() const { return tris_; }

    bool contains(std::size_t t, const Point& p) const {
        const auto& T = tris_[t];
        return in_closed_triangle(p, (*poly_)[T[0]], (*poly_)[T[1]], (*poly_)[T[2]]);
    }

    std::size_t locate(const Point& p) const {
        for (std::size_t t = 0; t < tris_.size(); ++t)
            if (contains(t, p)) return t;
        throw GeometryError("point outside polygon");
    }

    // Turning points of the shortest path from a to b, endpoints included.
    std::vector<PathNode> shortest_path(const PathNode& a, const PathNode& b) const {
        std::size_t ta = locate(a.p), tb = locate(b.p);
        std::vector<std::size_t> chain = tree_path(ta, tb);
        std::size_t first = 0;
        for (std::size_t k = 0; k < chain.size(); ++k)
            if (contains(chain[k], a.p)) first = k;
        std::size_t last = chain.size() - 1;
        for (std::size_t k = chain.size(); k-- > first;)
            if (contains(chain[k], b.p)) last = k;
        chain = std::vector<std::size_t>(chain.begin() + static_cast<long>(first),
                                         chain.begin() + static_cast<long>(last) + 1);

        std::vector<std::pair<PathNode, PathNode>> portals;  // (left, right)
        portals.emplace_back(a, a);
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            const auto& T = tris_[chain[k]];
            const auto& U = tris_[chain[k + 1]];
            // edge of T shared with U, in T's CCW direction: (p, q); travelling out of T, q is left
            for (int j = 0; j < 3; ++j) {
                std::size_t p = T[j], q = T[(j + 1) % 3];
                bool shared = std::find(U.begin(), U.end(), p) != U.end() &&
                              std::find(U.begin(), U.end(), q) != U.end();
                if (shared) {
                    portals.emplace_back(node(q), node(p));
                    break;
                }
            }
        }
        portals.emplace_back(b, b);
        return pull_string(portals);
    }

private:
    PathNode node(std::size_t i) const { return {(*poly_)[i], static_cast<long>(i)}; }

    std::vector<std::size_t> tree_path(std::size_t from, std::size_t to) const {
        std::vector<long> parent(tris_.size(), -2);
        std::deque<std::size_t> q{from};
        parent[from] = -1;
        while (!q.empty()) {
            std::size_t t = q.front();
            q.pop_front();
            if (t == to) break;
            for (std::size_t u : adj_[t])
                if (parent[u] == -2) {
                    parent[u] = static_cast<long>(t);
                    q.push_back(u);
                }
        }
        std::vector<std::size_t> out;
        for (long t = static_cast<long>(to); t != -1; t = parent[static_cast<std::size_t>(t)])
            out.push_back(static_cast<std::size_t>(t));
        std::reverse(out.begin(), out.end());
        return out;
    }

    static std::vector<PathNode> pull_string(const std::vector<std::pair<PathNode, PathNode>>& portals) {
        std::vector<PathNode> path{portals.front().first};
        PathNode apex = portals.front().first, left = apex, right = apex;
        std::size_t li = 0, ri = 0;
        for (std::size_t i = 1; i < portals.size(); ++i) {
            const PathNode& nl = portals[i].first;
            const PathNode& nr = portals[i].second;
            if (orient(apex.p, right.p, nr.p) >= 0) {
                if (apex.p == right.p || orient(apex.p, left.p, nr.p) < 0) {
                    right = nr;
                    ri = i;
                } else {
                    path.push_back(left);
                    apex = left;
                    right = left;
                    ri = li;
                    i = li;
                    continue;
                }
            }
            if (orient(apex.p, left.p, nl.p) <= 0) {
                if (apex.p == left.p || orient(apex.p, right.p, nl.p) > 0) {
                    left = nl;
                    li = i;
                } else {
                    path.push_back(right);
                    apex = right;
                    left = right;
                    li = ri;
                    i = ri;
                    continue;
                }
            }
        }
        if (!(path.back().p == portals.back().first.p)) path.push_back(portals.back().first);
        // drop repeats and straight pass-throughs so only genuine turns remain
        std::vector<PathNode> out;
        for (auto& nd : path) {
            if (!out.empty() && out.back().p == nd.p) continue;
            while (out.size() >= 2 && orient(out[out.size() - 2].p, out.back().p, nd.p) == 0) out.pop_back();
            out.push_back(nd);
        }
        return out;
    }

    const SimplePolygon* poly_;
    std::vector<Triangle> tris_;
    std::vector<std::vector<std::size_t>> adj_;
};

inline PolyPath geodesic(const SimplePolygon& poly, const Point& a, const Point& b) {
    if (poly.locate(a) == Location::EXTERIOR || poly.locate(b) == Location::EXTERIOR)
        throw GeometryError("geodesic: endpoint outside polygon");
    Triangulation tri(poly);
    PolyPath out;
    for (auto& nd : tri.shortest_path({a, -1}, {b, -1})) out.points.push_back(nd.p);
    return out;
}

// Adds the host vertices lying in the interior of path segments.
inline PolyPath with_pass_through_vertices(const SimplePolygon& poly, const PolyPath& path) {
    PolyPath out;
    for (std::size_t k = 0; k + 1 < path.points.size(); ++k) {
        const Point& a = path.points[k];
        const Point& b = path.points[k + 1];
        out.points.push_back(a);
        std::vector<std::pair<Rational, Point>> inner;
        for (const Point& v : poly.vertices())
            if (in_segment_interior(v, a, b)) inner.emplace_back(param_on(v, a, b), v);
        std::sort(inner.begin(), inner.end(), [](auto& x, auto& y) { return x.first < y.first; });
        for (auto& [t, v] : inner) out.points.push_back(v);
    }
    if (!path.points.empty()) out.points.push_back(path.points.back());
    return out;
}

// parent[w] is the last turning vertex on the geodesic from s to w; parent[s] = -1.
struct ShortestPathTree {
    std::size_t root = 0;
    std::vector<long> parent;

    std::vector<std::size_t> path_to_root(std::size_t w) const {
        std::vector<std::size_t> out{w};
        while (parent[out.back()] >= 0) out.push_back(static_cast<std::size_t>(parent[out.back()]));
        return out;
    }
    std::vector<bool> leaves() const {
        std::vector<bool> leaf(parent.size(), true);
        for (long p : parent)
            if (p >= 0) leaf[static_cast<std::size_t>(p)] = false;
        return leaf;
    }
};

inline ShortestPathTree shortest_path_tree(const SimplePolygon& poly, std::size_t s) {
    Triangulation tri(poly);
    ShortestPathTree tree{s, std::vector<long>(poly.size(), -1)};
    for (std::size_t w = 0; w < poly.size(); ++w) {
        if (w == s) continue;
        auto path = tri.shortest_path({poly[s], static_cast<long>(s)}, {poly[w], static_cast<long>(w)});
        long par = path[path.size() - 2].vertex;
        if (par < 0) throw GeometryError("shortest path turned at a non-vertex");
        tree.parent[w] = par;
    }
    return tree;
}

}  // namespace cfguard
