#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cfguard/funnel.hpp"
#include "cfguard/visibility.hpp"

namespace cfguard {

namespace detail {

inline std::vector<Point> int_points(std::initializer_list<std::pair<long, long>> xy) {
    std::vector<Point> out;
    for (auto [x, y] : xy) out.push_back({Rational(x), Rational(y)});
    return out;
}

// Deterministic across standard libraries: only raw engine output is used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }
    long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

}  // namespace detail

inline const std::vector<std::string>& gallery_ids() {
    static const std::vector<std::string> ids{"fig2", "fig3", "fig4",  "fig5", "fig6fwd",
                                              "fig6b", "fig7a", "fig7b", "bowl", "bowtie_bowls"};
    return ids;
}

inline std::vector<Point> fig2_points() {
    return detail::int_points({{193, 471}, {500, 500}, {872, 676}, {1061, 821}, {1301, 1071},
                               {1437, 1250}, {1625, 1699}, {1683, 1437}, {1733, 1305}, {1922, 1080},
                               {2210, 849}, {2350, 758}, {2800, 510}, {2900, 471}});
}

inline std::vector<Point> fig3_points() {
    const std::vector<std::pair<long, long>> left{{-2300, 0},  {-1850, 50}, {-1600, 100}, {-940, 280},
                                                  {-730, 420}, {-350, 700}, {-200, 850},  {-50, 1300}};
    std::vector<Point> pts{{Rational(left[0].first), Rational(left[0].second)}};
    for (auto& [x, y] : left) pts.push_back({Rational(-x), Rational(y)});
    pts.push_back({Rational(0), Rational(1700)});
    for (std::size_t i = left.size(); i-- > 1;) pts.push_back({Rational(left[i].first), Rational(left[i].second)});
    return pts;
}

// The drawing also shows two unconnected nodes near the base corner; they are not part of the
// outline.
inline std::vector<Point> fig4_points() {
    return detail::int_points({{-500, 0},  {-390, 10},  {-346, 20},  {-297, 32},  {-262, 43},  {-253, 46},
                               {-210, 70}, {-165, 96},  {-153, 104}, {-103, 154}, {-66, 202},  {-62, 212},
                               {-32, 308}, {-19, 370},  {-14, 407},  {-3, 554},   {3, 800},    {26, 651},
                               {67, 409},  {82, 342},   {99, 279},   {124, 223},  {141, 192},  {160, 168},
                               {180, 143}, {205, 116},  {223, 97},   {256, 71},   {283, 57},   {319, 42},
                               {394, 21},  {433, 11},   {500, 0}});
}

inline std::vector<Point> fig5_points() {
    return detail::int_points({{0, 0},      {600, 90},    {790, 200},   {800, 600},   {700, 800},
                               {430, 900},  {500, 1150},  {780, 950},   {1100, 800},  {1500, 850},
                               {1500, 1150}, {1450, 1300}, {1650, 1200}, {1800, 1300}, {1900, 1000},
                               {1950, 900}, {2300, 800},  {2400, 1050}, {2420, 1200}, {2600, 1100},
                               {3100, 1000}, {2860, 800}, {2730, 600},  {2500, 150},  {3100, 0}});
}

inline std::vector<Point> fig7a_points() {
    return detail::int_points({{0, 0}, {250, -20}, {200, 0}, {100, 200}, {100, 160}, {-40, -20}});
}

inline std::vector<Point> fig7b_points() {
    return detail::int_points({{0, 0}, {100, 20}, {200, 20}, {300, 0}, {300, 200}, {200, 180}, {100, 180}, {0, 200}});
}

// CCW, starting with the door p1 -> p2.
inline std::vector<Point> bowl_points() {
    return detail::int_points({{-6, -30},  {6, -30},   {190, 100}, {190, 133}, {197, 166}, {210, 200}, {110, 200},
                               {89, 166},  {64, 133},  {30, 100},  {10, 90},   {-10, 90},  {-30, 100}, {-64, 133},
                               {-89, 166}, {-110, 200}, {-210, 200}, {-197, 166}, {-190, 133}, {-190, 100}});
}

// Forward declarations of the larger constructions defined further down.
inline SimplePolygon fig6fwd_polygon();
inline SimplePolygon fig6b_polygon();
inline SimplePolygon bowtie_with_bowls(const Rational& door_width, const Rational& squeeze);
inline SimplePolygon bowtie_with_bowls();

inline SimplePolygon gallery(const std::string& id) {
    if (id == "fig2") return SimplePolygon(fig2_points());
    if (id == "fig3") return SimplePolygon(fig3_points());
    if (id == "fig4") return SimplePolygon(fig4_points());
    if (id == "fig5") return SimplePolygon(fig5_points());
    if (id == "fig6fwd") return fig6fwd_polygon();
    if (id == "fig6b") return fig6b_polygon();
    if (id == "fig7a") return SimplePolygon(fig7a_points());
    if (id == "fig7b") return SimplePolygon(fig7b_points());
    if (id == "bowl") return SimplePolygon(bowl_points());
    if (id == "bowtie_bowls") return bowtie_with_bowls();
    throw GeometryError("unknown gallery id: " + id);
}

// ---------------------------------------------------------------------------------------------
// Funnels

namespace detail {

struct Step {
    long dx, dy;  // dx > 0, dy > 0
};

inline bool slopes_strictly_increasing(const std::vector<Step>& s) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i].dy * s[i + 1].dx >= s[i + 1].dy * s[i].dx) return false;
    return true;
}

// l1 at the origin; L climbs with steepening steps, R descends from the apex with steps that
// flatten towards the base.
inline std::optional<SimplePolygon> funnel_from_steps(const std::vector<Step>& ls, const std::vector<Step>& rs) {
    std::vector<Point> left{{Rational(0), Rational(0)}};
    for (const Step& s : ls) left.push_back(left.back() + Point{Rational(s.dx), Rational(s.dy)});
    std::vector<Point> right{left.back()};  // apex first, going down
    for (std::size_t i = rs.size(); i-- > 0;) right.push_back(right.back() + Point{Rational(rs[i].dx), Rational(-rs[i].dy)});
    // ring: l1, r1..r_{m-1}, apex, l_{k-1}..l2
    std::vector<Point> ring{left.front()};
    for (std::size_t i = right.size(); i-- > 1;) ring.push_back(right[i]);
    ring.push_back(left.back());
    for (std::size_t i = left.size() - 1; i-- > 1;) ring.push_back(left[i]);
    try {
        SimplePolygon p(std::move(ring), {false, false});
        if (!classify_funnel(p)) return std::nullopt;
        return p;
    } catch (const GeometryError&) {
        return std::nullopt;
    }
}

inline std::vector<Step> random_steps(Rng& rng, std::size_t count, double lo_deg, double hi_deg, double length) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<double> ang(count);
        for (double& a : ang) a = lo_deg + (hi_deg - lo_deg) * rng.unit();
        std::sort(ang.begin(), ang.end());
        std::vector<Step> out;
        for (double a : ang) {
            double len = length * (0.4 + 1.2 * rng.unit());
            double r = a * 3.14159265358979323846 / 180.0;
            out.push_back({std::max(1L, std::lround(len * std::cos(r))), std::max(1L, std::lround(len * std::sin(r)))});
        }
        if (slopes_strictly_increasing(out)) return out;
    }
    throw GeometryError("random_steps: retry exhaustion");
}

}  // namespace detail

struct FunnelConfig {
    std::uint64_t seed = 1;
    std::size_t left = 4;   // |L| including the apex
    std::size_t right = 4;  // |R| including the apex
};

inline Funnel random_funnel(const FunnelConfig& cfg) {
    if (cfg.left < 2 || cfg.right < 2) throw GeometryError("random_funnel: chain sizes must be >= 2");
    detail::Rng rng(cfg.seed);
    for (int attempt = 0; attempt < 2000; ++attempt) {
        double lo_l = 2 + 40 * rng.unit(), lo_r = 2 + 40 * rng.unit();
        double hi_l = std::max(lo_l + 5, 60 + 28 * rng.unit()), hi_r = std::max(lo_r + 5, 60 + 28 * rng.unit());
        auto ls = detail::random_steps(rng, cfg.left - 1, lo_l, hi_l, 1e6 / static_cast<double>(cfg.left));
        auto rs = detail::random_steps(rng, cfg.right - 1, lo_r, hi_r, 1e6 / static_cast<double>(cfg.right));
        // match heights so the base stays roughly level
        long hl = 0, hr = 0;
        for (auto& s : ls) hl += s.dy;
        for (auto& s : rs) hr += s.dy;
        double scale = static_cast<double>(hl) / static_cast<double>(hr);
        for (auto& s : rs) {
            s.dx = std::max(1L, std::lround(static_cast<double>(s.dx) * scale));
            s.dy = std::max(1L, std::lround(static_cast<double>(s.dy) * scale));
        }
        if (!detail::slopes_strictly_increasing(rs)) continue;
        if (auto p = detail::funnel_from_steps(ls, rs)) return *classify_funnel(*p);
    }
    throw GeometryError("random_funnel: retry exhaustion");
}

// Every funnel whose chain steps are subsets of a fixed direction grid, n <= max_n.
inline std::vector<Funnel> tiny_funnel_family(std::size_t max_n = 9) {
    const std::vector<detail::Step> grid{{5, 1}, {3, 2}, {2, 3}, {1, 4}, {1, 9}};
    const std::size_t g = grid.size();
    auto subsets = [&](std::size_t size) {
        std::vector<std::vector<detail::Step>> out;
        for (unsigned mask = 1; mask < (1u << g); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
            std::vector<detail::Step> s;
            for (std::size_t b = 0; b < g; ++b)
                if (mask & (1u << b)) s.push_back({grid[b].dx * 2, grid[b].dy * 2});
            out.push_back(std::move(s));
        }
        return out;
    };
    std::vector<Funnel> out;
    for (std::size_t a = 1; a <= g; ++a)
        for (std::size_t b = 1; b <= g; ++b) {
            if (a + b + 1 > max_n) continue;
            for (auto& ls : subsets(a))
                for (auto& rs : subsets(b))
                    if (auto p = detail::funnel_from_steps(ls, rs)) out.push_back(*classify_funnel(*p));
        }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Simple and weak visibility polygons

struct SimplePolygonConfig {
    std::uint64_t seed = 1;
    std::size_t n = 12;
    long box = 0;  // coordinate range [0, box]; 0 picks 40 * n
};

namespace detail {

inline bool has_collinear_triple(const std::vector<Point>& pts, const Point& c) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (orient(pts[i], pts[j], c) == 0) return true;
    return false;
}

// Reverses the stretch between two crossing edges until no crossing is left; each step
// shortens the tour, so it terminates.
inline void untangle(std::vector<Point>& ring) {
    const std::size_t n = ring.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n && !changed; ++i)
            for (std::size_t j = i + 2; j < n && !changed; ++j) {
                if (i == 0 && j == n - 1) continue;
                if (segments_intersect(ring[i], ring[i + 1], ring[j], ring[(j + 1) % n])) {
                    std::reverse(ring.begin() + static_cast<long>(i) + 1, ring.begin() + static_cast<long>(j) + 1);
                    changed = true;
                }
            }
    }
}

}  // namespace detail

// Integer points in general position joined by 2-opt untangling of a random tour.
inline SimplePolygon random_simple_polygon(const SimplePolygonConfig& cfg) {
    if (cfg.n < 3) throw GeometryError("random_simple_polygon: n must be >= 3");
    const long box = cfg.box > 0 ? cfg.box : 40 * static_cast<long>(cfg.n);
    detail::Rng rng(cfg.seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Point> pts;
        for (int tries = 0; pts.size() < cfg.n && tries < 100000; ++tries) {
            Point c{Rational(rng.range(0, box)), Rational(rng.range(0, box))};
            if (std::find(pts.begin(), pts.end(), c) != pts.end() || detail::has_collinear_triple(pts, c)) continue;
            pts.push_back(std::move(c));
        }
        if (pts.size() < cfg.n) continue;
        detail::untangle(pts);
        try {
            return SimplePolygon(std::move(pts));
        } catch (const GeometryError&) {
        }
    }
    throw GeometryError("random_simple_polygon: retry exhaustion");
}

struct WeakVisibilityConfig {
    std::uint64_t seed = 1;
    std::size_t max_n = 60;   // upper bound on the vertex count
    std::size_t host_n = 0;   // random mode: size of the host polygon; 0 picks from the seed
    std::size_t apices = 0;   // comb mode when > 0: a zigzag roof with this many peaks
};

struct WeakVisibilityInstance {
    SimplePolygon polygon;
    std::size_t base = 0;
};

namespace detail {

// Base (0,0)-(1000a,0) under an x-monotone zigzag of a peaks and a-1 valleys.
inline WeakVisibilityInstance comb_polygon(std::size_t apices, Rng& rng) {
    const long a = static_cast<long>(apices);
    std::vector<Point> ring{{Rational(0), Rational(0)}, {Rational(1000 * a), Rational(0)}};
    for (long k = a - 1; k >= 0; --k) {
        ring.push_back({Rational(1000 * k + rng.range(300, 700)), Rational(rng.range(2600, 3400))});
        if (k > 0) ring.push_back({Rational(1000 * k + rng.range(-100, 100)), Rational(rng.range(1200, 2000))});
    }
    return {SimplePolygon(std::move(ring)), 0};
}

// Radially monotone around (0,-depth): base (-w,0)-(w,0) followed by points sorted by angle.
inline SimplePolygon radial_host(std::size_t n, Rng& rng) {
    const long w = 1000, depth = rng.range(0, 1500);
    std::vector<std::pair<double, Point>> pts;
    while (pts.size() + 2 < n) {
        double ang = 0.05 + (3.14159265358979323846 - 0.1) * rng.unit();
        double rad = 1500 + 6000 * rng.unit();
        long x = std::lround(rad * std::cos(ang)), y = std::lround(rad * std::sin(ang)) - depth;
        if (y <= 0) continue;
        // keep the points beyond the base as seen from the centre
        Point p{Rational(x), Rational(y)};
        const Point c{Rational(0), Rational(-depth)}, u{Rational(-w), Rational(0)}, v{Rational(w), Rational(0)};
        if (orient(c, v, p) <= 0 || orient(c, p, u) <= 0) continue;
        pts.emplace_back(std::atan2(static_cast<double>(y + depth), static_cast<double>(x)), std::move(p));
    }
    std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<Point> ring{{Rational(-w), Rational(0)}, {Rational(w), Rational(0)}};
    for (auto& [a, p] : pts) ring.push_back(p);
    return SimplePolygon(std::move(ring), {false, false});
}

}  // namespace detail

// Random mode: the weak visibility polygon of a random edge of a random simple polygon, i.e. the
// union of all funnels over that edge.
inline WeakVisibilityInstance random_weak_visibility_polygon(const WeakVisibilityConfig& cfg) {
    detail::Rng rng(cfg.seed);
    if (cfg.apices > 0) return detail::comb_polygon(cfg.apices, rng);
    if (cfg.max_n < 4) throw GeometryError("random_weak_visibility_polygon: max_n must be >= 4");
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::size_t hn = cfg.host_n > 0 ? cfg.host_n : static_cast<std::size_t>(rng.range(4, std::max<long>(5, static_cast<long>(cfg.max_n))));
        SimplePolygon host;
        std::size_t e = 0;
        try {
            if (rng.below(2) == 0) {
                host = detail::radial_host(hn, rng);
            } else {
                host = random_simple_polygon({rng.below(1ULL << 62), hn, 0});
                e = rng.below(host.size());
            }
        } catch (const GeometryError&) {
            continue;
        }
        auto vp = visibility_polygon_edge(host, e);
        if (vp.size() < 4 || vp.size() > cfg.max_n) continue;
        std::size_t base = vp.find_vertex(host[e]);
        if (base == SimplePolygon::npos || !(vp[vp.next(base)] == host[host.next(e)])) continue;
        // drop straight vertices so the instance is a plain simple polygon
        try {
            auto ring = std::vector<Point>(vp.vertices().begin(), vp.vertices().end());
            std::vector<Point> kept;
            for (std::size_t i = 0; i < ring.size(); ++i)
                if (orient(ring[(i + ring.size() - 1) % ring.size()], ring[i], ring[(i + 1) % ring.size()]) != 0)
                    kept.push_back(ring[i]);
            SimplePolygon out(std::move(kept), {false, false});
            std::size_t b = out.find_vertex(host[e]);
            if (b == SimplePolygon::npos || !(out[out.next(b)] == host[host.next(e)])) continue;
            return {std::move(out), b};
        } catch (const GeometryError&) {
        }
    }
    throw GeometryError("random_weak_visibility_polygon: retry exhaustion");
}

// Points 2..24 of the forward-partitioning figure (point 16 nudged off the line 15-17), with the
// drawn point 1 becoming the landing of the cut from 24 on edge A-2. The base (last edge) sits in
// a narrow wedge above 24 so the only sight lines into the pocket pass 24 and land between 1
// and A, the extreme one exactly at 1.
inline std::vector<Point> fig6fwd_points() {
    return detail::int_points({{975, -225}, {150, 150},   {50, 250},    {-100, 300},  {-500, 400},  {-100, 400},
                               {220, 480},  {340, 660},   {300, 830},   {180, 965},   {-300, 1030}, {-35, 1055},
                               {230, 1130}, {400, 1360},  {460, 1480},  {410, 1600},  {350, 1700},  {250, 1800},
                               {-100, 1750}, {160, 1880}, {220, 1940},  {350, 2100},  {250, 2400},  {1200, 1400},
                               {1200, 1800}, {1330, 2200}, {1400, 2000}});
}

inline std::vector<Point> fig6b_points() {
    return detail::int_points({{360, 400},   {520, 420},  {350, 470},  {660, 440},  {400, 500},  {640, 500},
                               {350, 600},   {580, 580},  {400, 700},  {520, 660},  {440, 760},  {800, 400},
                               {1060, 680},  {1100, 500}, {1250, 750}, {1600, 700}, {1500, 800}, {1100, 900},
                               {1620, 800},  {1650, 400}, {1550, 650}, {1000, 400}, {1100, 380}, {1200, 400},
                               {1150, 350},  {1200, 300}, {1000, 360}});
}

inline SimplePolygon fig6fwd_polygon() { return SimplePolygon(fig6fwd_points()); }
inline SimplePolygon fig6b_polygon() { return SimplePolygon(fig6b_points()); }
// ---------------------------------------------------------------------------------------------
// Bowtie with four bowls

struct RequirementsViolated : GeometryError {
    using GeometryError::GeometryError;
};

// Vertex roles in the composite polygon (indices into polygon).
struct BowtieLayout {
    SimplePolygon polygon;
    std::size_t t = 0, t_prime = 0;
    std::array<std::size_t, 4> r{}, s{};                  // r1..r4, s1..s4
    std::array<std::array<std::size_t, 2>, 4> doors{};    // door ends at q1..q4
    std::array<std::vector<std::size_t>, 4> bowls;        // bowl vertices other than the door ends
};

// Bowtie frame, counter-clockwise: t s1 s2 q4 q3 s3 s4 t' r4 r3 q2 q1 r2 r1 (figure x100).
inline std::vector<Point> bowtie_points() {
    return detail::int_points({{0, -30},  {200, -83}, {400, -150}, {450, -40}, {450, 40}, {400, 150}, {200, 83},
                               {0, 30},   {-200, 83}, {-400, 150}, {-450, 40}, {-450, -40}, {-400, -150},
                               {-200, -83}});
}

// door_width (figure units) is cut around each q, measured along y on both adjacent edges, and
// the door ends take the place of p1, p2. The other bowl vertices are placed by an axis-aligned
// map: depth 16 and across squeeze/2 per bowl unit, i.e. long thin bowls, so
// the door can shrink without shrinking the bowl. The visibility requirements are audited
// exactly, plus a check that the glued bowl keeps the visibility graph of the plain bowl.
inline BowtieLayout bowtie_layout(const Rational& door_width, const Rational& squeeze) {
    if (door_width <= 0 || squeeze <= 0) throw GeometryError("bowtie_with_bowls: parameters must be positive");
    const auto frame = bowtie_points();
    const auto bowl = bowl_points();  // p1 p2 c1 .. a1, CCW
    const Rational half = door_width * 50;
    const std::array<std::size_t, 4> q_pos{11, 10, 4, 3};  // q1..q4 in frame
    std::vector<Point> ring;
    std::vector<int> tag;  // -1 frame vertex, k>=0 bowl k interior, 10+k door end of bowl k
    for (std::size_t i = 0; i < frame.size(); ++i) {
        auto qk = std::find(q_pos.begin(), q_pos.end(), i);
        if (qk == q_pos.end()) {
            ring.push_back(frame[i]);
            tag.push_back(-1);
            continue;
        }
        const int k = static_cast<int>(qk - q_pos.begin());
        const Point& q = frame[i];
        const Point& prev = frame[(i + frame.size() - 1) % frame.size()];
        const Point& next = frame[(i + 1) % frame.size()];
        Point e_in = q + Rational(half / abs(prev.y - q.y)) * (prev - q);
        Point e_out = q + Rational(half / abs(next.y - q.y)) * (next - q);
        const Rational out = q.x < 0 ? -1 : 1;
        // bowl x runs from e_out towards e_in; bowl y points away from the frame
        Point ax{Rational(0), Rational(e_in.y > e_out.y ? 1 : -1) * squeeze / 2};
        Point ay{out * 16, Rational(0)};
        if (cross(ax, ay) <= 0) throw GeometryError("bowtie_with_bowls: bowl map reverses orientation");
        Point mid = midpoint(e_in, e_out);
        auto map = [&](const Point& b) { return mid + b.x * ax + Rational(b.y + 30) * ay; };
        ring.push_back(e_in);
        tag.push_back(10 + k);
        for (std::size_t j = 2; j < bowl.size(); ++j) {
            ring.push_back(map(bowl[j]));
            tag.push_back(k);
        }
        ring.push_back(e_out);
        tag.push_back(10 + k);
    }
    BowtieLayout L;
    try {
        L.polygon = SimplePolygon(ring, {false, false});
    } catch (const GeometryError& e) {
        throw RequirementsViolated(std::string("bowtie_with_bowls: composite is not simple: ") + e.what());
    }
    auto at = [&](std::size_t frame_idx) { return L.polygon.find_vertex(frame[frame_idx]); };
    L.t = at(0);
    L.t_prime = at(7);
    L.r = {at(13), at(12), at(9), at(8)};
    L.s = {at(1), at(2), at(5), at(6)};
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (tag[i] >= 10) {
            auto& d = L.doors[static_cast<std::size_t>(tag[i] - 10)];
            (d[0] == 0 && d[1] == 0 ? d[0] : d[1]) = i;
        } else if (tag[i] >= 0) {
            L.bowls[static_cast<std::size_t>(tag[i])].push_back(i);
        }
    }
    const SimplePolygon& P = L.polygon;
    auto name = [&](std::size_t v) { return std::to_string(v); };
    // (a) bowl interiors see nothing outside their bowl
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t b : L.bowls[k])
            for (std::size_t w = 0; w < P.size(); ++w) {
                if (w == L.doors[k][0] || w == L.doors[k][1]) continue;
                if (std::find(L.bowls[k].begin(), L.bowls[k].end(), w) != L.bowls[k].end()) continue;
                if (sees(P, b, w))
                    throw RequirementsViolated("bowtie_with_bowls: requirement (a) fails: " + name(b) + " sees " + name(w));
            }
    // glued bowls keep the plain bowl's visibility graph (door ends stand for p2, p1)
    {
        const SimplePolygon plain(bowl);
        for (std::size_t k = 0; k < 4; ++k) {
            std::vector<std::size_t> ids{L.doors[k][1], L.doors[k][0]};
            ids.insert(ids.end(), L.bowls[k].begin(), L.bowls[k].end());
            for (std::size_t i = 0; i < ids.size(); ++i)
                for (std::size_t j = i + 1; j < ids.size(); ++j)
                    if (sees(P, ids[i], ids[j]) != sees(plain, i, j))
                        throw RequirementsViolated("bowtie_with_bowls: bowl visibility changed between " + name(ids[i]) +
                                                   " and " + name(ids[j]));
        }
    }
    // (b) t and t' see every door end
    for (std::size_t o : {L.t, L.t_prime})
        for (auto& d : L.doors)
            for (std::size_t w : d)
                if (!sees(P, o, w))
                    throw RequirementsViolated("bowtie_with_bowls: requirement (b) fails: " + name(o) + " misses " + name(w));
    // (c) r2, r3, s2, s3 each see exactly one of t, t'
    for (std::size_t v : {L.r[1], L.r[2], L.s[1], L.s[2]})
        if (sees(P, v, L.t) == sees(P, v, L.t_prime))
            throw RequirementsViolated("bowtie_with_bowls: requirement (c) fails at " + name(v));
    return L;
}

inline SimplePolygon bowtie_with_bowls(const Rational& door_width, const Rational& squeeze) {
    return bowtie_layout(door_width, squeeze).polygon;
}
inline SimplePolygon bowtie_with_bowls() { return bowtie_with_bowls(Rational(1, 50), Rational(1, 4)); }

// Distinguished edge of a gallery polygon (funnel base, weak-visibility base, or the starting
// edge of the decomposition figures), as an index into gallery(id).
inline std::size_t gallery_base(const std::string& id) {
    auto P = gallery(id);
    auto edge_between = [&](const Point& a, const Point& b) {
        std::size_t i = P.find_vertex(a), j = P.find_vertex(b);
        if (i == SimplePolygon::npos || j == SimplePolygon::npos) throw GeometryError("gallery_base: bad endpoints");
        if (P.next(i) == j) return i;
        if (P.next(j) == i) return j;
        throw GeometryError("gallery_base: not an edge");
    };
    if (id == "fig2" || id == "fig3" || id == "fig4") {
        auto f = classify_funnel(P);
        if (!f) throw GeometryError("gallery_base: not a funnel");
        return f->left.front();
    }
    if (id == "fig5") return edge_between(fig5_points().front(), fig5_points().back());
    if (id == "fig6fwd") return edge_between(fig6fwd_points()[25], fig6fwd_points()[26]);
    if (id == "fig6b") return edge_between(fig6b_points()[18], fig6b_points()[19]);
    if (id == "bowl") return edge_between(bowl_points()[0], bowl_points()[1]);
    return 0;
}

}  // namespace cfguard
