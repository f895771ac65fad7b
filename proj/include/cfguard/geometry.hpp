#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cfguard {

using Rational = mpq_class;

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw GeometryError("empty rational");
    if (s.front() == '+') s.erase(0, 1);
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
            throw GeometryError("malformed rational '" + std::string(text) + "'");
    Rational r;
    if (r.set_str(s, 10) != 0) throw GeometryError("malformed rational '" + std::string(text) + "'");
    if (r.get_den() == 0) throw GeometryError("zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline int sign(const Rational& r) { return sgn(r); }

inline double to_double(const Rational& r) { return r.get_d(); }

struct Point {
    Rational x, y;
    // rounded copies for filtered predicates; coordinates are never mutated after construction
    double fx = 0, fy = 0;

    Point() = default;
    Point(Rational px, Rational py) : x(std::move(px)), y(std::move(py)), fx(x.get_d()), fy(y.get_d()) {}
    Point(long px, long py) : x(px), y(py), fx(static_cast<double>(px)), fy(static_cast<double>(py)) {}

    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator<(const Point& a, const Point& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    }
    friend Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(const Rational& s, const Point& a) { return {s * a.x, s * a.y}; }
};

inline Rational cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline Rational dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }

// (q - p) x (r - p)
inline Rational cross3(const Point& p, const Point& q, const Point& r) {
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
}

enum class Orientation { CW = -1, COLLINEAR = 0, CCW = 1 };

// a > b for coordinates with their rounded copies; exact only when the doubles are too close.
inline bool coord_greater(double fa, const Rational& a, double fb, const Rational& b) {
    const double gap = fa - fb, bound = 1e-12 * (std::abs(fa) + std::abs(fb));
    if (std::isfinite(gap) && std::abs(gap) > bound) return gap > 0;
    return a > b;
}

// Sign of cross3(p, q, r) from doubles when the result clears a conservative rounding bound,
// 0 when undecided.
inline int orient_filtered(const Point& p, const Point& q, const Point& r) {
    const double px = p.fx, py = p.fy, qx = q.fx, qy = q.fy, rx = r.fx, ry = r.fy;
    const double l = (qx - px) * (ry - py), m = (qy - py) * (rx - px);
    const double det = l - m;
    const double bound = 1e-12 * ((std::abs(qx) + std::abs(px)) * (std::abs(ry) + std::abs(py)) +
                                  (std::abs(qy) + std::abs(py)) * (std::abs(rx) + std::abs(px)));
    if (!std::isfinite(det) || !std::isfinite(bound)) return 0;
    if (det > bound) return 1;
    if (det < -bound) return -1;
    return 0;
}

inline int orient(const Point& p, const Point& q, const Point& r) {
    if (int f = orient_filtered(p, q, r)) return f;
    return sgn(cross3(p, q, r));
}

inline Orientation orientation(const Point& p, const Point& q, const Point& r) {
    return static_cast<Orientation>(orient(p, q, r));
}

inline Point lerp(const Point& a, const Point& b, const Rational& t) {
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

inline Point midpoint(const Point& a, const Point& b) {
    return {(a.x + b.x) / 2, (a.y + b.y) / 2};
}

// Closed segment membership.
inline bool on_segment(const Point& p, const Point& a, const Point& b) {
    if (orient(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// Strictly inside the segment (excluding endpoints).
inline bool in_segment_interior(const Point& p, const Point& a, const Point& b) {
    return on_segment(p, a, b) && !(p == a) && !(p == b);
}

// Parameter of p along a->b, assuming p is on the supporting line.
inline Rational param_on(const Point& p, const Point& a, const Point& b) {
    Point d = b - a;
    return dot(p - a, d) / dot(d, d);
}

inline bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return (o1 == 0 && on_segment(c, a, b)) || (o2 == 0 && on_segment(d, a, b)) ||
           (o3 == 0 && on_segment(a, c, d)) || (o4 == 0 && on_segment(b, c, d));
}

inline bool segments_cross_properly(const Point& a, const Point& b, const Point& c, const Point& d) {
    return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

// Intersection of the lines ab and cd; precondition: not parallel.
inline Point line_intersection(const Point& a, const Point& b, const Point& c, const Point& d) {
    Point r = b - a, s = d - c;
    Rational den = cross(r, s);
    if (den == 0) throw GeometryError("parallel lines");
    Rational t = cross(c - a, s) / den;
    return lerp(a, b, t);
}

// Parameters t on segment a->b at which it meets segment c-d (closed). Collinear overlaps
// contribute the overlap endpoints.
inline void segment_hits(const Point& a, const Point& b, const Point& c, const Point& d,
                         std::vector<Rational>& out, const Rational& lo = 0, const Rational& hi = 1) {
    if (int f = orient_filtered(a, b, c); f != 0 && f == orient_filtered(a, b, d)) return;
    if (int f = orient_filtered(c, d, a); f != 0 && f == orient_filtered(c, d, b)) return;
    Point r = b - a, s = d - c;
    Rational den = cross(r, s);
    if (den != 0) {
        Point ca = c - a;
        Rational t = cross(ca, s) / den;
        Rational u = cross(ca, r) / den;
        if (t >= lo && t <= hi && u >= 0 && u <= 1) out.push_back(std::move(t));
        return;
    }
    if (cross(c - a, r) != 0) return;
    Rational rr = dot(r, r);
    Rational tc = dot(c - a, r) / rr, td = dot(d - a, r) / rr;
    if (tc > td) std::swap(tc, td);
    Rational from = std::max(tc, lo), to = std::min(td, hi);
    if (from > to) return;
    out.push_back(from);
    if (to != from) out.push_back(to);
}

inline void sort_unique(std::vector<Rational>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// floor(log2(x)) for x >= 1.
inline int floor_log2(std::uint64_t x) {
    int r = -1;
    while (x) {
        x >>= 1;
        ++r;
    }
    return r;
}

inline int ceil_log2(std::uint64_t x) {
    int f = floor_log2(x);
    return (std::uint64_t{1} << f) == x ? f : f + 1;
}

// 1-based ruler sequence: 1 + number of trailing zeros of i.
inline int ruler(std::uint64_t i) {
    if (i == 0) throw GeometryError("ruler index must be positive");
    int r = 1;
    while ((i & 1) == 0) {
        i >>= 1;
        ++r;
    }
    return r;
}

}  // namespace cfguard
