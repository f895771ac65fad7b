#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfguard/geodesic.hpp"
#include "cfguard/guarding.hpp"
#include "cfguard/sat.hpp"
#include "cfguard/visibility.hpp"

namespace cfguard {

enum class Verdict { OK, FAIL, INCONCLUSIVE_SAMPLED };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::OK: return "OK";
        case Verdict::FAIL: return "FAIL";
        default: return "INCONCLUSIVE-SAMPLED";
    }
}

struct VerificationReport {
    Verdict verdict = Verdict::OK;
    std::optional<Point> witness;
    std::optional<std::size_t> witness_vertex;
    std::vector<std::size_t> census;  // guard vertices seen from the witness
    std::size_t cells = 0;
    std::string detail;

    bool ok() const { return verdict == Verdict::OK; }
};

struct OverlayBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::size_t default_cell_budget() {
    if (const char* env = std::getenv("CFGUARD_CELL_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return 5'000'000;
}

struct VerifyOptions {
    std::size_t cell_budget = default_cell_budget();
    bool exact_only = false;
    std::size_t samples = 20'000;
    std::uint64_t seed = 0x5eed;
};

enum class CellKind { FACE, EDGE, VERTEX };

// Arrangement of P's edges and every source's windows. Inside each cell the set of sources
// that see a point is constant.
class VisibilityOverlay {
public:
    struct Cell {
        CellKind kind;
        Point rep;
        std::vector<std::uint32_t> visible;  // indices into sources(), ascending
    };

    VisibilityOverlay(const SimplePolygon& poly, std::vector<std::size_t> sources,
                      std::size_t cell_budget = default_cell_budget())
        : poly_(&poly), sources_(std::move(sources)) {
        collect_segments();
        split_segments();
        const std::size_t nv = points_.size(), ne = edges_.size();
        if (nv + ne + (ne + 2 > nv ? ne + 2 - nv : 0) > cell_budget)
            throw OverlayBudgetExceeded("overlay exceeds cell budget");
        link_half_edges();
        trace_faces();
        label_faces();
        label_edges_and_vertices();
    }

    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<std::size_t>& sources() const { return sources_; }
    std::size_t face_count() const { return face_count_; }
    const Rational& interior_area() const { return interior_area_; }

private:
    struct Segment {
        Point a, b;
        long owner;  // -1 for a polygon edge, else source index
    };
    struct Edge {
        std::size_t u, v;
        std::vector<std::uint32_t> owners;
        bool boundary = false;
    };

    void collect_segments() {
        const auto& P = *poly_;
        for (std::size_t i = 0; i < P.size(); ++i) segs_.push_back({P[i], P[P.next(i)], -1});
        for (std::size_t s = 0; s < sources_.size(); ++s) {
            const Point& g = P[sources_[s]];
            for (std::size_t w = 0; w < P.size(); ++w) {
                if (w == sources_[s] || !sees(P, g, P[w])) continue;
                Point e = ray_exit(P, g, P[w]);
                if (!(e == P[w])) segs_.push_back({P[w], e, static_cast<long>(s)});
            }
        }
    }

    std::size_t point_id(const Point& p) {
        auto [it, fresh] = ids_.emplace(p, points_.size());
        if (fresh) points_.push_back(p);
        return it->second;
    }

    void split_segments() {
        const std::size_t S = segs_.size();
        struct Box {
            double x0, x1, y0, y1;
        };
        std::vector<Box> box(S);
        std::vector<std::array<double, 4>> approx(S);
        double scale = 1;
        for (std::size_t i = 0; i < S; ++i) {
            double ax = to_double(segs_[i].a.x), bx = to_double(segs_[i].b.x);
            double ay = to_double(segs_[i].a.y), by = to_double(segs_[i].b.y);
            double pad = 1e-9 * (1 + std::max({std::abs(ax), std::abs(bx), std::abs(ay), std::abs(by)}));
            box[i] = {std::min(ax, bx) - pad, std::max(ax, bx) + pad, std::min(ay, by) - pad, std::max(ay, by) + pad};
            approx[i] = {ax, ay, bx, by};
            scale = std::max({scale, std::abs(ax), std::abs(bx), std::abs(ay), std::abs(by)});
        }
        // Floating-point side tests; a pair is skipped only when one segment lies strictly on one
        // side of the other's line by a margin far above the rounding error.
        const double tol = 1e-9 * scale * scale;
        auto side = [&](const std::array<double, 4>& s, double px, double py) {
            double d = (s[2] - s[0]) * (py - s[1]) - (s[3] - s[1]) * (px - s[0]);
            return d > tol ? 1 : d < -tol ? -1 : 0;
        };
        auto apart = [&](std::size_t i, std::size_t j) {
            for (auto [p, q] : {std::pair{i, j}, std::pair{j, i}}) {
                int u = side(approx[p], approx[q][0], approx[q][1]);
                int v = side(approx[p], approx[q][2], approx[q][3]);
                if (u != 0 && u == v) return true;
            }
            return false;
        };
        std::vector<std::vector<Rational>> params(S);
        for (std::size_t i = 0; i < S; ++i) params[i] = {Rational(0), Rational(1)};
        for (std::size_t i = 0; i < S; ++i)
            for (std::size_t j = i + 1; j < S; ++j) {
                if (box[i].x1 < box[j].x0 || box[j].x1 < box[i].x0 || box[i].y1 < box[j].y0 || box[j].y1 < box[i].y0)
                    continue;
                if (apart(i, j)) continue;
                const Segment& s = segs_[i];
                const Segment& t = segs_[j];
                segment_hits(s.a, s.b, t.a, t.b, params[i]);
                segment_hits(t.a, t.b, s.a, s.b, params[j]);
            }
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_of;
        for (std::size_t i = 0; i < S; ++i) {
            sort_unique(params[i]);
            std::size_t prev = point_id(segs_[i].a);
            for (std::size_t k = 1; k < params[i].size(); ++k) {
                std::size_t cur = point_id(lerp(segs_[i].a, segs_[i].b, params[i][k]));
                if (cur == prev) continue;
                auto key = std::minmax(prev, cur);
                auto [it, fresh] = edge_of.emplace(key, edges_.size());
                if (fresh) edges_.push_back({key.first, key.second, {}, false});
                Edge& e = edges_[it->second];
                if (segs_[i].owner < 0) e.boundary = true;
                else e.owners.push_back(static_cast<std::uint32_t>(segs_[i].owner));
                prev = cur;
            }
        }
        for (Edge& e : edges_) {
            std::sort(e.owners.begin(), e.owners.end());
            e.owners.erase(std::unique(e.owners.begin(), e.owners.end()), e.owners.end());
        }
    }

    // Half-edge 2e runs u->v, 2e+1 runs v->u.
    std::size_t tail(std::size_t h) const { return h % 2 ? edges_[h / 2].v : edges_[h / 2].u; }
    std::size_t head(std::size_t h) const { return h % 2 ? edges_[h / 2].u : edges_[h / 2].v; }
    Point dir(std::size_t h) const { return points_[head(h)] - points_[tail(h)]; }

    static bool angle_less(const Point& a, const Point& b) {
        auto half = [](const Point& d) { return (d.y > 0 || (d.y == 0 && d.x > 0)) ? 0 : 1; };
        int ha = half(a), hb = half(b);
        if (ha != hb) return ha < hb;
        return cross(a, b) > 0;
    }

    void link_half_edges() {
        std::vector<std::vector<std::size_t>> around(points_.size());
        for (std::size_t h = 0; h < 2 * edges_.size(); ++h) around[tail(h)].push_back(h);
        pos_.assign(2 * edges_.size(), 0);
        for (auto& list : around) {
            std::sort(list.begin(), list.end(), [&](std::size_t x, std::size_t y) { return angle_less(dir(x), dir(y)); });
            for (std::size_t k = 0; k < list.size(); ++k) pos_[list[k]] = k;
        }
        next_.assign(2 * edges_.size(), 0);
        for (std::size_t h = 0; h < 2 * edges_.size(); ++h) {
            std::size_t twin = h ^ 1;
            const auto& list = around[head(h)];
            std::size_t k = pos_[twin];
            next_[h] = list[(k + list.size() - 1) % list.size()];
        }
        around_ = std::move(around);
    }

    void trace_faces() {
        face_of_.assign(2 * edges_.size(), SIZE_MAX);
        for (std::size_t h0 = 0; h0 < 2 * edges_.size(); ++h0) {
            if (face_of_[h0] != SIZE_MAX) continue;
            std::size_t f = faces_.size();
            faces_.push_back({});
            std::size_t h = h0;
            do {
                face_of_[h] = f;
                faces_[f].push_back(h);
                h = next_[h];
            } while (h != h0);
        }
        face_area2_.resize(faces_.size());
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            Rational a = 0;
            for (std::size_t h : faces_[f]) a += cross(points_[tail(h)], points_[head(h)]);
            face_area2_[f] = a;
            if (a > 0) {
                interior_area_ += a / 2;
                ++face_count_;
            }
        }
        if (interior_area_ != poly_->area()) throw GeometryError("overlay faces do not tile the polygon");
    }

    Point face_representative(std::size_t f) const {
        std::vector<Point> ring;
        for (std::size_t h : faces_[f]) ring.push_back(points_[tail(h)]);
        ring = detail::clean_ring(std::move(ring));
        const std::size_t m = ring.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Point& a = ring[(i + m - 1) % m];
            const Point& b = ring[i];
            const Point& c = ring[(i + 1) % m];
            if (orient(a, b, c) <= 0) continue;
            bool empty = true;
            for (std::size_t j = 0; j < m && empty; ++j) {
                if (j == i || j == (i + 1) % m || j == (i + m - 1) % m) continue;
                if (in_closed_triangle(ring[j], a, b, c)) empty = false;
            }
            if (empty) return Point{(a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3};
        }
        throw GeometryError("overlay face without an ear");
    }

    void label_faces() {
        const auto& P = *poly_;
        face_rep_.assign(faces_.size(), Point{});
        face_vis_.assign(faces_.size(), {});
        std::vector<bool> done(faces_.size(), false);
        for (std::size_t start = 0; start < faces_.size(); ++start) {
            if (done[start] || face_area2_[start] <= 0) continue;
            face_rep_[start] = face_representative(start);
            for (std::size_t s = 0; s < sources_.size(); ++s)
                if (sees(P, P[sources_[s]], face_rep_[start])) face_vis_[start].push_back(static_cast<std::uint32_t>(s));
            done[start] = true;
            std::deque<std::size_t> queue{start};
            while (!queue.empty()) {
                std::size_t f = queue.front();
                queue.pop_front();
                for (std::size_t h : faces_[f]) {
                    const Edge& e = edges_[h / 2];
                    std::size_t g = face_of_[h ^ 1];
                    if (e.boundary || done[g] || face_area2_[g] <= 0) continue;
                    done[g] = true;
                    face_rep_[g] = face_representative(g);
                    std::set<std::uint32_t> vis(face_vis_[f].begin(), face_vis_[f].end());
                    for (std::uint32_t s : e.owners) {
                        if (sees(P, P[sources_[s]], face_rep_[g])) vis.insert(s);
                        else vis.erase(s);
                    }
                    face_vis_[g].assign(vis.begin(), vis.end());
                    queue.push_back(g);
                }
            }
        }
        for (std::size_t f = 0; f < faces_.size(); ++f)
            if (face_area2_[f] > 0) cells_.push_back({CellKind::FACE, face_rep_[f], face_vis_[f]});
    }

    void label_edges_and_vertices() {
        const auto& P = *poly_;
        std::vector<std::set<std::uint32_t>> vertex_vis(points_.size());
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            std::set<std::uint32_t> vis;
            for (std::size_t h : {2 * e, 2 * e + 1}) {
                std::size_t f = face_of_[h];
                if (face_area2_[f] > 0) vis.insert(face_vis_[f].begin(), face_vis_[f].end());
            }
            const Point& a = points_[edges_[e].u];
            const Point& b = points_[edges_[e].v];
            Point mid = midpoint(a, b);
            for (std::size_t s = 0; s < sources_.size(); ++s) {
                if (vis.count(static_cast<std::uint32_t>(s))) continue;
                const Point& g = P[sources_[s]];
                if (orient(a, b, g) == 0 && sees(P, g, mid)) vis.insert(static_cast<std::uint32_t>(s));
            }
            cells_.push_back({CellKind::EDGE, mid, {vis.begin(), vis.end()}});
            vertex_vis[edges_[e].u].insert(vis.begin(), vis.end());
            vertex_vis[edges_[e].v].insert(vis.begin(), vis.end());
        }
        for (std::size_t v = 0; v < points_.size(); ++v)
            cells_.push_back({CellKind::VERTEX, points_[v], {vertex_vis[v].begin(), vertex_vis[v].end()}});
    }

    const SimplePolygon* poly_;
    std::vector<std::size_t> sources_;
    std::vector<Segment> segs_;
    std::vector<Point> points_;
    std::map<Point, std::size_t> ids_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> around_;
    std::vector<std::size_t> pos_, next_, face_of_;
    std::vector<std::vector<std::size_t>> faces_;
    std::vector<Rational> face_area2_;
    std::vector<Point> face_rep_;
    std::vector<std::vector<std::uint32_t>> face_vis_;
    std::vector<Cell> cells_;
    std::size_t face_count_ = 0;
    Rational interior_area_ = 0;
};

namespace detail {

// True when some colour occurs exactly once among the given colours.
inline bool has_unique_colour(std::vector<ColourId> colours) {
    std::sort(colours.begin(), colours.end());
    for (std::size_t i = 0; i < colours.size();) {
        std::size_t j = i;
        while (j < colours.size() && colours[j] == colours[i]) ++j;
        if (j - i == 1) return true;
        i = j;
    }
    return false;
}

// Uniform rational points in P, area-weighted over an ear-clipping triangulation.
inline std::vector<Point> sample_points(const SimplePolygon& poly, std::size_t count, std::uint64_t seed) {
    auto tris = triangulate(poly);
    std::vector<double> cum;
    double total = 0;
    for (auto& t : tris) {
        total += to_double(cross3(poly[t[0]], poly[t[1]], poly[t[2]]));
        cum.push_back(total);
    }
    std::mt19937_64 eng(seed);
    const long den = 1 << 20;
    std::vector<Point> out;
    for (std::size_t k = 0; k < count; ++k) {
        double r = static_cast<double>(eng() >> 11) * 0x1.0p-53 * total;
        std::size_t ti = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), r) - cum.begin());
        ti = std::min(ti, tris.size() - 1);
        long a = static_cast<long>(eng() % den), b = static_cast<long>(eng() % den);
        if (a + b > den) a = den - a, b = den - b;
        Rational wa(a, den), wb(b, den);
        const auto& t = tris[ti];
        Point p0 = poly[t[0]];
        out.push_back(p0 + wa * (poly[t[1]] - p0) + wb * (poly[t[2]] - p0));
    }
    return out;
}

// Shared driver: exact overlay, or sampling when the budget is exceeded.
template <class Pred>
VerificationReport verify_points(const SimplePolygon& poly, const std::vector<std::size_t>& guards, Pred ok,
                                 const VerifyOptions& opt) {
    VerificationReport rep;
    auto fail_at = [&](const Point& p, std::vector<std::size_t> census) {
        rep.verdict = Verdict::FAIL;
        rep.witness = p;
        rep.census = std::move(census);
    };
    try {
        VisibilityOverlay ov(poly, guards, opt.cell_budget);
        rep.cells = ov.cells().size();
        for (const auto& cell : ov.cells()) {
            std::vector<std::size_t> seen;
            for (auto s : cell.visible) seen.push_back(guards[s]);
            if (!ok(seen)) {
                fail_at(cell.rep, std::move(seen));
                return rep;
            }
        }
        return rep;
    } catch (const OverlayBudgetExceeded&) {
        if (opt.exact_only) throw;
    }
    rep.detail = "cell budget exceeded; sampled";
    auto probe = [&](const Point& p) {
        std::vector<std::size_t> seen;
        for (std::size_t g : guards)
            if (sees(poly, poly[g], p)) seen.push_back(g);
        if (!ok(seen)) {
            fail_at(p, std::move(seen));
            return false;
        }
        return true;
    };
    for (const Point& v : poly.vertices())
        if (!probe(v)) return rep;
    for (const Point& p : sample_points(poly, opt.samples, opt.seed))
        if (!probe(p)) return rep;
    rep.verdict = Verdict::INCONCLUSIVE_SAMPLED;
    return rep;
}

}  // namespace detail

inline VerificationReport v2p_verify(const SimplePolygon& poly, const ColouredGuarding& g, const VerifyOptions& opt = {}) {
    for (auto& [v, c] : g.assignments)
        if (v >= poly.size()) throw GeometryError("guard index out of range");
    auto guards = g.guards();
    return detail::verify_points(
        poly, guards,
        [&](const std::vector<std::size_t>& seen) {
            std::vector<ColourId> cs;
            for (auto v : seen) cs.push_back(g.assignments.at(v));
            return detail::has_unique_colour(std::move(cs));
        },
        opt);
}

inline VerificationReport coverage_verify(const SimplePolygon& poly, std::vector<std::size_t> guards,
                                          const VerifyOptions& opt = {}) {
    std::sort(guards.begin(), guards.end());
    guards.erase(std::unique(guards.begin(), guards.end()), guards.end());
    for (auto v : guards)
        if (v >= poly.size()) throw GeometryError("guard index out of range");
    return detail::verify_points(poly, guards, [](const std::vector<std::size_t>& seen) { return !seen.empty(); }, opt);
}

// adjacency[i] lists j != i with sees(i, j), ascending.
inline std::vector<std::vector<std::size_t>> visibility_graph(const SimplePolygon& poly) {
    const std::size_t n = poly.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (sees(poly, i, j)) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

inline std::vector<std::vector<std::size_t>> closed_neighbourhoods(const SimplePolygon& poly) {
    auto adj = visibility_graph(poly);
    for (std::size_t i = 0; i < adj.size(); ++i) {
        adj[i].push_back(i);
        std::sort(adj[i].begin(), adj[i].end());
    }
    return adj;
}

inline VerificationReport v2v_verify(const SimplePolygon& poly, const ColouredGuarding& g) {
    auto nbh = closed_neighbourhoods(poly);
    VerificationReport rep;
    rep.cells = poly.size();
    for (std::size_t v = 0; v < poly.size(); ++v) {
        std::vector<ColourId> cs;
        std::vector<std::size_t> seen;
        for (std::size_t w : nbh[v]) {
            auto it = g.assignments.find(w);
            if (it == g.assignments.end()) continue;
            cs.push_back(it->second);
            seen.push_back(w);
        }
        if (!detail::has_unique_colour(std::move(cs))) {
            rep.verdict = Verdict::FAIL;
            rep.witness_vertex = v;
            rep.witness = poly[v];
            rep.census = std::move(seen);
            return rep;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Conflict-free hypergraph colouring by backtracking. Each variable is either unguarded (0) or
// carries a colour 1..c; every hyperedge needs a colour occurring exactly once on it.

enum class SearchStatus { FOUND, NONE, UNKNOWN };

struct ConflictFreeResult {
    SearchStatus status = SearchStatus::UNKNOWN;
    std::vector<int> assignment;  // per variable, 0 = no guard
    std::uint64_t nodes = 0;
};

class ConflictFreeSolver {
public:
    ConflictFreeSolver(std::size_t vars, std::vector<std::vector<std::size_t>> hyperedges)
        : n_(vars), edges_(std::move(hyperedges)), incident_(vars) {
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        for (std::size_t e = 0; e < edges_.size(); ++e)
            for (std::size_t v : edges_[e]) incident_[v].push_back(e);
    }

    // forced[v] >= 0 pins variable v to that state.
    ConflictFreeResult solve(int colours, std::uint64_t node_budget, const std::vector<int>& forced = {}) {
        c_ = colours;
        budget_ = node_budget;
        nodes_ = 0;
        exhausted_ = false;
        cache_.clear();
        state_.assign(n_, -1);
        count_.assign(edges_.size(), std::vector<int>(static_cast<std::size_t>(c_) + 1, 0));
        undecided_.assign(edges_.size(), 0);
        for (std::size_t e = 0; e < edges_.size(); ++e) undecided_[e] = static_cast<int>(edges_[e].size());
        ConflictFreeResult res;
        for (std::size_t v = 0; v < forced.size() && v < n_; ++v)
            if (forced[v] >= 0) {
                if (forced[v] > c_) {
                    res.status = SearchStatus::NONE;
                    return res;
                }
                assign(v, forced[v]);
            }
        for (std::size_t e = 0; e < edges_.size(); ++e)
            if (!feasible(e)) {
                res.status = SearchStatus::NONE;
                return res;
            }
        std::vector<std::size_t> free;
        for (std::size_t v = 0; v < n_; ++v)
            if (state_[v] < 0) free.push_back(v);
        int max_used = 0;
        for (int s : state_) max_used = std::max(max_used, s);
        bool ok = search(free, max_used);
        res.nodes = nodes_;
        if (ok) {
            res.status = SearchStatus::FOUND;
            res.assignment.resize(n_);
            for (std::size_t v = 0; v < n_; ++v) res.assignment[v] = std::max(0, state_[v]);
        } else {
            res.status = exhausted_ ? SearchStatus::UNKNOWN : SearchStatus::NONE;
        }
        return res;
    }

    const std::vector<std::vector<std::size_t>>& hyperedges() const { return edges_; }

private:
    void assign(std::size_t v, int s) {
        state_[v] = s;
        for (std::size_t e : incident_[v]) {
            --undecided_[e];
            ++count_[e][static_cast<std::size_t>(s)];
        }
    }
    void unassign(std::size_t v) {
        int s = state_[v];
        for (std::size_t e : incident_[v]) {
            ++undecided_[e];
            --count_[e][static_cast<std::size_t>(s)];
        }
        state_[v] = -1;
    }
    bool feasible(std::size_t e) const {
        const auto& cnt = count_[e];
        for (int k = 1; k <= c_; ++k) {
            if (cnt[static_cast<std::size_t>(k)] == 1) return true;
            if (cnt[static_cast<std::size_t>(k)] == 0 && undecided_[e] > 0) return true;
        }
        return false;
    }

    // Undecided variables split into groups that share no live hyperedge; each group is solved
    // on its own.
    std::vector<std::vector<std::size_t>> components(const std::vector<std::size_t>& free) const {
        std::map<std::size_t, std::size_t> local;
        for (std::size_t i = 0; i < free.size(); ++i) local[free[i]] = i;
        std::vector<std::size_t> parent(free.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            if (undecided_[e] < 2) continue;
            std::optional<std::size_t> first;
            for (std::size_t v : edges_[e]) {
                auto it = local.find(v);
                if (state_[v] >= 0 || it == local.end()) continue;  // decided, or another group's
                std::size_t lv = it->second;
                if (!first) first = lv;
                else parent[find(lv)] = find(*first);
            }
        }
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < free.size(); ++i) groups[find(i)].push_back(free[i]);
        std::vector<std::vector<std::size_t>> out;
        for (auto& [r, g] : groups) out.push_back(std::move(g));
        return out;
    }

    bool search(std::vector<std::size_t> free, int max_used) {
        if (free.empty()) return true;
        auto comps = components(free);
        if (comps.size() > 1) {
            std::vector<std::size_t> done;
            for (auto& comp : comps) {
                if (!search(comp, max_used)) {
                    for (std::size_t v : done) unassign(v);
                    return false;
                }
                for (std::size_t v : comp) done.push_back(v);
            }
            // keep assignments; they are reported by the caller
            return true;
        }
        auto key = cache_key(free, max_used);
        if (auto hit = cache_.find(key); hit != cache_.end()) {
            if (!hit->second) return false;
            for (std::size_t i = 0; i < free.size(); ++i)
                if ((*hit->second)[i] >= 0) assign(free[i], (*hit->second)[i]);
            return true;
        }
        const bool ok = branch(free, max_used);
        if (cache_.size() > kCacheCap) cache_.clear();
        if (ok) {
            std::vector<int> sol(free.size());
            for (std::size_t i = 0; i < free.size(); ++i) sol[i] = state_[free[i]];
            cache_.emplace(std::move(key), std::move(sol));
        } else if (!exhausted_) {
            cache_.emplace(std::move(key), std::nullopt);
        }
        return ok;
    }

    // A connected group's outcome depends only on its variables, the colour counts already
    // placed on its hyperedges and the symmetry bound.
    std::vector<int> cache_key(const std::vector<std::size_t>& free, int max_used) const {
        std::vector<int> key{max_used, static_cast<int>(free.size())};
        std::vector<std::size_t> sorted = free;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> touched;
        for (std::size_t v : sorted) {
            key.push_back(static_cast<int>(v));
            touched.insert(touched.end(), incident_[v].begin(), incident_[v].end());
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (std::size_t e : touched) {
            key.push_back(-1 - static_cast<int>(e));
            key.insert(key.end(), count_[e].begin() + 1, count_[e].end());
        }
        return key;
    }

    bool branch(std::vector<std::size_t> free, int max_used) {
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return false;
        }
        // most constrained first: largest number of incident hyperedges, then lowest index
        std::size_t pick = 0;
        for (std::size_t i = 1; i < free.size(); ++i)
            if (incident_[free[i]].size() > incident_[free[pick]].size()) pick = i;
        std::size_t v = free[pick];
        free.erase(free.begin() + static_cast<long>(pick));
        const int top = std::min(c_, max_used + 1);  // colours are interchangeable
        for (int s = 0; s <= top; ++s) {
            assign(v, s);
            bool ok = true;
            for (std::size_t e : incident_[v])
                if (!feasible(e)) {
                    ok = false;
                    break;
                }
            if (ok && search(free, std::max(max_used, s))) return true;
            unassign(v);
            if (exhausted_) return false;
        }
        return false;
    }

    std::size_t n_;
    std::vector<std::vector<std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> incident_;
    int c_ = 1;
    std::uint64_t budget_ = 0, nodes_ = 0;
    bool exhausted_ = false;
    std::vector<int> state_;
    std::vector<std::vector<int>> count_;
    std::vector<int> undecided_;
    static constexpr std::size_t kCacheCap = 1'000'000;
    std::map<std::vector<int>, std::optional<std::vector<int>>> cache_;
};

struct MinColoursResult {
    std::optional<int> colours;  // nullopt = UNKNOWN
    ColouredGuarding witness;
    std::uint64_t nodes = 0;
};

inline ColouredGuarding guarding_from_assignment(const std::vector<int>& a) {
    ColouredGuarding g;
    for (std::size_t v = 0; v < a.size(); ++v)
        if (a[v] > 0) g.assignments[v] = a[v];
    return g;
}

namespace detail {

inline MinColoursResult min_colours(std::size_t n, std::vector<std::vector<std::size_t>> hyperedges, int c_max,
                                    std::uint64_t budget) {
    ConflictFreeSolver solver(n, std::move(hyperedges));
    MinColoursResult out;
    for (int c = 1; c <= c_max; ++c) {
        auto r = solver.solve(c, budget);
        out.nodes += r.nodes;
        if (r.status == SearchStatus::FOUND) {
            out.colours = c;
            out.witness = guarding_from_assignment(r.assignment);
            return out;
        }
        if (r.status == SearchStatus::UNKNOWN) return out;
    }
    return out;
}

// Same question as min_colours, answered by clause learning. x(v,k): v holds a guard of colour
// k. For each hyperedge one of u(E,k) holds, and u(E,k) means exactly one x(v,k) in E
// (at-most-one by a sequential counter). budget counts conflicts per colour count.
inline MinColoursResult min_colours_cdcl(std::size_t n, const std::vector<std::vector<std::size_t>>& hyperedges,
                                         int c_max, std::uint64_t budget) {
    MinColoursResult out;
    for (int c = 1; c <= c_max; ++c) {
        sat::Solver s;
        std::vector<std::vector<int>> x(n, std::vector<int>(static_cast<std::size_t>(c) + 1, 0));
        for (std::size_t v = 0; v < n; ++v)
            for (int k = 1; k <= c; ++k) x[v][static_cast<std::size_t>(k)] = s.new_var();
        for (std::size_t v = 0; v < n; ++v)
            for (int a = 1; a <= c; ++a)
                for (int b = a + 1; b <= c; ++b)
                    s.add_clause({-x[v][static_cast<std::size_t>(a)], -x[v][static_cast<std::size_t>(b)]});
        for (const auto& e : hyperedges) {
            std::vector<int> some;
            for (int k = 1; k <= c; ++k) {
                const int u = s.new_var();
                some.push_back(u);
                std::vector<int> at_least{-u};
                int prev = 0;  // "an earlier member has colour k"
                for (std::size_t v : e) {
                    const int xv = x[v][static_cast<std::size_t>(k)];
                    at_least.push_back(xv);
                    if (prev) s.add_clause({-u, -prev, -xv});
                    const int cur = s.new_var();
                    s.add_clause({-xv, cur});
                    if (prev) s.add_clause({-prev, cur});
                    prev = cur;
                }
                s.add_clause(std::move(at_least));
            }
            s.add_clause(std::move(some));
        }
        const auto r = s.solve(budget);
        out.nodes += s.conflicts();
        if (r == sat::Result::UNKNOWN) return out;
        if (r == sat::Result::SAT) {
            std::vector<int> a(n, 0);
            for (std::size_t v = 0; v < n; ++v)
                for (int k = 1; k <= c; ++k)
                    if (s.model_value(x[v][static_cast<std::size_t>(k)])) a[v] = k;
            out.colours = c;
            out.witness = guarding_from_assignment(a);
            return out;
        }
    }
    return out;
}

}  // namespace detail

// budget: conflicts allowed per colour count.
inline MinColoursResult v2v_min_colours(const SimplePolygon& poly, int c_max, std::uint64_t budget = 10'000'000) {
    return detail::min_colours_cdcl(poly.size(), closed_neighbourhoods(poly), c_max, budget);
}

// Sets of vertices seeing each overlay cell when every vertex is a guard.
inline std::vector<std::vector<std::size_t>> cell_viewer_sets(const SimplePolygon& poly) {
    std::vector<std::size_t> all(poly.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    VisibilityOverlay ov(poly, all);
    std::set<std::vector<std::size_t>> sets;
    for (const auto& cell : ov.cells()) sets.insert({cell.visible.begin(), cell.visible.end()});
    return {sets.begin(), sets.end()};
}

constexpr std::size_t kBruteforceVertexCap = 24;

inline std::size_t min_guards_bruteforce(const SimplePolygon& poly) {
    const std::size_t n = poly.size();
    if (n > kBruteforceVertexCap) throw std::length_error("min_guards_bruteforce: polygon too large");
    std::vector<std::uint32_t> masks;
    for (auto& s : cell_viewer_sets(poly)) {
        std::uint32_t m = 0;
        for (auto v : s) m |= 1u << v;
        masks.push_back(m);
    }
    const std::uint32_t limit = 1u << n;
    for (std::size_t k = 1; k <= n; ++k) {
        // all k-subsets in increasing order (Gosper)
        for (std::uint32_t sel = (1u << k) - 1; sel < limit;) {
            if (std::all_of(masks.begin(), masks.end(), [&](std::uint32_t m) { return (m & sel) != 0; })) return k;
            std::uint32_t c = sel & -sel, r = sel + c;
            sel = (((r ^ sel) >> 2) / c) | r;
        }
    }
    return n;
}

inline MinColoursResult v2p_min_colours_bruteforce(const SimplePolygon& poly, int c_max,
                                                   std::uint64_t budget = 50'000'000) {
    if (poly.size() > kBruteforceVertexCap) throw std::length_error("v2p_min_colours_bruteforce: polygon too large");
    return detail::min_colours(poly.size(), cell_viewer_sets(poly), c_max, budget);
}

}  // namespace cfguard
