#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "cfguard/geometry.hpp"

namespace cfguard {

enum class Location { INTERIOR, BOUNDARY, EXTERIOR };

struct PolygonOptions {
    bool allow_collinear = false;
    bool normalise = true;  // reverse CW input instead of rejecting it
};

class SimplePolygon {
public:
    SimplePolygon() = default;

    explicit SimplePolygon(std::vector<Point> pts, PolygonOptions opt = {}) : v_(std::move(pts)) {
        validate(opt);
    }

    std::size_t size() const { return v_.size(); }
    const Point& operator[](std::size_t i) const { return v_[i]; }
    const Point& vertex(std::size_t i) const { return v_[i]; }
    std::span<const Point> vertices() const { return v_; }
    std::size_t next(std::size_t i) const { return i + 1 == v_.size() ? 0 : i + 1; }
    std::size_t prev(std::size_t i) const { return i == 0 ? v_.size() - 1 : i - 1; }
    // True when the input list was clockwise and got reversed; index k of the input is then
    // n-1-k here.
    bool was_reversed() const { return reversed_; }
    std::size_t input_index_to_own(std::size_t k) const { return reversed_ ? size() - 1 - k : k; }

    // Twice the signed area (positive after validation).
    Rational area2() const {
        Rational a = 0;
        for (std::size_t i = 0; i < v_.size(); ++i) a += cross(v_[i], v_[next(i)]);
        return a;
    }
    Rational area() const { return area2() / 2; }

    bool is_convex_vertex(std::size_t i) const { return orient(v_[prev(i)], v_[i], v_[next(i)]) > 0; }
    bool is_reflex(std::size_t i) const { return orient(v_[prev(i)], v_[i], v_[next(i)]) < 0; }

    // Index of a vertex equal to p, or npos.
    std::size_t find_vertex(const Point& p) const {
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (v_[i] == p) return i;
        return npos;
    }
    // Index i of an edge (v_i, v_{i+1}) containing p in its closed segment, or npos.
    std::size_t find_edge(const Point& p) const {
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (on_segment(p, v_[i], v_[next(i)])) return i;
        return npos;
    }

    Location locate(const Point& p) const {
        bool inside = false;
        const std::size_t n = v_.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point& a = v_[j];
            const Point& b = v_[i];
            if (on_segment(p, a, b)) return Location::BOUNDARY;
            if (coord_greater(a.fy, a.y, p.fy, p.y) != coord_greater(b.fy, b.y, p.fy, p.y)) {
                // crossing of the rightward ray: p strictly left of the edge direction going up
                int o = orient(a, b, p);
                if (coord_greater(b.fy, b.y, a.fy, a.y) ? o > 0 : o < 0) inside = !inside;
            }
        }
        return inside ? Location::INTERIOR : Location::EXTERIOR;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    void validate(const PolygonOptions& opt) {
        const std::size_t n = v_.size();
        if (n < 3) throw GeometryError("polygon needs at least 3 vertices");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (v_[i] == v_[j]) throw GeometryError("repeated vertex");
        Rational a2 = area2();
        if (a2 == 0) throw GeometryError("polygon has zero area");
        if (a2 < 0) {
            if (!opt.normalise) throw GeometryError("polygon is clockwise");
            std::reverse(v_.begin(), v_.end());
            reversed_ = true;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Point& p = v_[prev(i)];
            const Point& c = v_[i];
            const Point& q = v_[next(i)];
            if (orient(p, c, q) == 0) {
                // a spike doubles back along the previous edge
                if (dot(c - p, q - c) < 0) throw GeometryError("polygon has a zero-width spike");
                if (!opt.allow_collinear) throw GeometryError("three consecutive collinear vertices");
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (j == i + 1 || (i == 0 && j == n - 1)) continue;
                if (segments_intersect(v_[i], v_[next(i)], v_[j], v_[next(j)]))
                    throw GeometryError("polygon is not simple");
            }
        }
    }

    std::vector<Point> v_;
    bool reversed_ = false;
};

inline Location point_location(const SimplePolygon& poly, const Point& p) { return poly.locate(p); }

inline bool is_reflex(const SimplePolygon& poly, std::size_t i) { return poly.is_reflex(i); }

}  // namespace cfguard
