#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "cfguard/funnel.hpp"
#include "cfguard/geodesic.hpp"
#include "cfguard/guarding.hpp"
#include "cfguard/visibility.hpp"

namespace cfguard {

// Chains are polygon indices, bottom-to-top, ending at the apex; left starts at u, right at v.
// Vertices that a geodesic passes straight through are included.
struct MaxFunnel {
    std::size_t apex = 0;
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;

    bool contains(std::size_t w) const {
        return std::find(left.begin(), left.end(), w) != left.end() ||
               std::find(right.begin(), right.end(), w) != right.end();
    }
    // Polygon when both chains are strictly concave, otherwise nullopt (degenerate funnel).
    std::optional<Funnel> as_funnel(const SimplePolygon& poly) const {
        std::vector<Point> ring{poly[left.front()]};
        for (std::size_t i = 0; i < right.size(); ++i) ring.push_back(poly[right[i]]);
        for (std::size_t i = left.size() - 1; i-- > 1;) ring.push_back(poly[left[i]]);
        try {
            SimplePolygon p(std::move(ring), {false, false});
            return classify_funnel(p);
        } catch (const GeometryError&) {
            return std::nullopt;
        }
    }
};

struct MaxFunnelSet {
    std::size_t base_edge = 0;
    std::size_t u = 0, v = 0;
    std::vector<MaxFunnel> funnels;             // left to right
    std::vector<int> set_index;                 // colour-set index per funnel
    std::vector<std::vector<std::size_t>> membership;  // per vertex: funnels containing it
    std::vector<std::size_t> association;       // per vertex: governing funnel

    std::size_t size() const { return funnels.size(); }
};

namespace detail {

// Like shortest_path_tree, but the parent of w is the vertex just before w on the geodesic,
// counting vertices passed straight through.
inline std::vector<long> fine_parents(const SimplePolygon& poly, const Triangulation& tri, std::size_t s) {
    std::vector<long> parent(poly.size(), -1);
    for (std::size_t w = 0; w < poly.size(); ++w) {
        if (w == s) continue;
        auto path = tri.shortest_path({poly[s], static_cast<long>(s)}, {poly[w], static_cast<long>(w)});
        const Point& a = path[path.size() - 2].p;
        long par = path[path.size() - 2].vertex;
        Rational best = 0;
        for (std::size_t x = 0; x < poly.size(); ++x) {
            if (!in_segment_interior(poly[x], a, poly[w])) continue;
            Rational t = param_on(poly[x], a, poly[w]);
            if (t > best) {
                best = t;
                par = static_cast<long>(x);
            }
        }
        if (par < 0) throw GeometryError("shortest path turned at a non-vertex");
        parent[w] = par;
    }
    return parent;
}

inline std::vector<std::size_t> chain_to(const std::vector<long>& parent, std::size_t w) {
    std::vector<std::size_t> out{w};
    while (parent[out.back()] >= 0) out.push_back(static_cast<std::size_t>(parent[out.back()]));
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace detail

inline MaxFunnelSet max_funnels(const SimplePolygon& poly, std::size_t e, bool check_weak_visibility = true) {
    const std::size_t n = poly.size();
    if (e >= n) throw GeometryError("max_funnels: edge index out of range");
    if (check_weak_visibility && !is_weakly_visible(poly, e))
        throw GeometryError("max_funnels: polygon is not weakly visible from the edge");
    MaxFunnelSet out;
    out.base_edge = e;
    out.u = e;
    out.v = poly.next(e);
    Triangulation tri(poly);
    auto pu = detail::fine_parents(poly, tri, out.u);
    auto pv = detail::fine_parents(poly, tri, out.v);
    std::vector<bool> leaf_u(n, true), leaf_v(n, true);
    for (std::size_t w = 0; w < n; ++w) {
        if (pu[w] >= 0) leaf_u[static_cast<std::size_t>(pu[w])] = false;
        if (pv[w] >= 0) leaf_v[static_cast<std::size_t>(pv[w])] = false;
    }
    // clockwise from u means decreasing index
    std::vector<std::size_t> apices;
    for (std::size_t w = 0; w < n; ++w)
        if (w != out.u && w != out.v && leaf_u[w] && leaf_v[w]) apices.push_back(w);
    std::sort(apices.begin(), apices.end(),
              [&](std::size_t a, std::size_t b) { return (out.u + n - a) % n < (out.u + n - b) % n; });
    for (std::size_t a : apices)
        out.funnels.push_back({a, detail::chain_to(pu, a), detail::chain_to(pv, a)});
    if (out.funnels.empty()) throw GeometryError("max_funnels: no common leaf");

    out.membership.assign(n, {});
    for (std::size_t i = 0; i < out.funnels.size(); ++i) {
        out.set_index.push_back(ruler(i + 1));
        for (std::size_t w = 0; w < n; ++w)
            if (out.funnels[i].contains(w)) out.membership[w].push_back(i);
    }
    out.association.assign(n, 0);
    for (std::size_t w = 0; w < n; ++w) {
        const auto& mem = out.membership[w];
        if (mem.empty()) throw GeometryError("max_funnels: vertex outside every max funnel");
        std::size_t best = mem.front();
        bool tie = false;
        for (std::size_t k = 1; k < mem.size(); ++k) {
            int j = out.set_index[mem[k]];
            if (j > out.set_index[best]) {
                best = mem[k];
                tie = false;
            } else if (j == out.set_index[best]) {
                tie = true;
            }
        }
        if (tie) throw GeometryError("max_funnels: association is not unique");
        out.association[w] = best;
    }
    return out;
}

// Upper bound on the colours used by colour_weak_visibility.
inline std::size_t weak_visibility_colour_bound(std::size_t n, std::size_t m) {
    return 2 * static_cast<std::size_t>(ceil_log2(n)) * (1 + static_cast<std::size_t>(floor_log2(m)));
}

inline ColouredGuarding colour_weak_visibility(const SimplePolygon& poly, const MaxFunnelSet& mfs) {
    const int half = std::max(1, ceil_log2(poly.size()));
    ColouredGuarding g;
    for (std::size_t i = 0; i < mfs.size(); ++i) {
        const auto& f = mfs.funnels[i];
        const int base = (mfs.set_index[i] - 1) * 2 * half;
        for (Side s : {Side::L, Side::R}) {
            const auto& chain = s == Side::L ? f.left : f.right;
            std::uint64_t k = 0;
            for (std::size_t pos = 0; pos + 1 < chain.size(); ++pos) {
                std::size_t w = chain[pos];
                if (mfs.association[w] != i) continue;
                g.assignments[w] = base + (s == Side::R ? half : 0) + ruler(++k);
            }
        }
    }
    return g;
}

inline ColouredGuarding colour_weak_visibility(const SimplePolygon& poly, std::size_t e) {
    return colour_weak_visibility(poly, max_funnels(poly, e));
}

}  // namespace cfguard
