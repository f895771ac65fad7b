#include <gtest/gtest.h>

#include <cmath>
#include <queue>
#include <random>

#include "cfguard/geodesic.hpp"
#include "cfguard/visibility.hpp"

using namespace cfguard;

namespace {

SimplePolygon poly_of(std::vector<std::pair<long, long>> pts, PolygonOptions opt = {}) {
    std::vector<Point> v;
    for (auto [x, y] : pts) v.emplace_back(x, y);
    return SimplePolygon(std::move(v), opt);
}

SimplePolygon unit_square() { return poly_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

SimplePolygon fig7a() { return poly_of({{0, 0}, {250, -20}, {200, 0}, {100, 200}, {100, 160}, {-40, -20}}); }

SimplePolygon comb() {
    return poly_of({{0, 0}, {100, 20}, {200, 20}, {300, 0}, {300, 200}, {200, 180}, {100, 180}, {0, 200}});
}

SimplePolygon l_hexagon() { return poly_of({{0, 0}, {20, 0}, {20, 10}, {10, 10}, {10, 20}, {0, 20}}); }

// Random star-shaped polygon around the origin: distinct angles, integer radii.
SimplePolygon random_star(std::mt19937& rng, int n) {
    for (;;) {
        std::uniform_real_distribution<double> ang(0, 2 * M_PI);
        std::uniform_int_distribution<int> rad(20, 100);
        std::vector<double> a(n);
        for (auto& x : a) x = ang(rng);
        std::sort(a.begin(), a.end());
        std::vector<Point> v;
        for (double t : a) {
            int r = rad(rng);
            v.emplace_back(std::lround(r * std::cos(t) * 10), std::lround(r * std::sin(t) * 10));
        }
        try {
            return SimplePolygon(v);
        } catch (const GeometryError&) {
        }
    }
}

// Oracle: no proper crossing with an edge and dense samples never exterior.
bool sees_oracle(const SimplePolygon& p, const Point& a, const Point& b) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (segments_cross_properly(a, b, p[i], p[p.next(i)])) return false;
    const int samples = 96;
    for (int k = 1; k < samples; ++k)
        if (p.locate(lerp(a, b, Rational(k, samples))) == Location::EXTERIOR) return false;
    return true;
}

Point random_point_in(const SimplePolygon& p, std::mt19937& rng) {
    Rational minx = p[0].x, maxx = p[0].x, miny = p[0].y, maxy = p[0].y;
    for (auto& v : p.vertices()) {
        minx = std::min(minx, v.x);
        maxx = std::max(maxx, v.x);
        miny = std::min(miny, v.y);
        maxy = std::max(maxy, v.y);
    }
    std::uniform_int_distribution<int> u(0, 100000);
    for (;;) {
        Point q(minx + (maxx - minx) * Rational(u(rng), 100000), miny + (maxy - miny) * Rational(u(rng), 100000));
        if (p.locate(q) != Location::EXTERIOR) return q;
    }
}

long double length(const Point& a, const Point& b) {
    long double dx = to_double(a.x - b.x), dy = to_double(a.y - b.y);
    return std::sqrt(dx * dx + dy * dy);
}

// Oracle: Dijkstra over the visibility graph.
std::vector<long double> dijkstra_lengths(const SimplePolygon& p, std::size_t s) {
    const std::size_t n = p.size();
    std::vector<std::vector<bool>> vis(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) vis[i][j] = vis[j][i] = sees_oracle(p, p[i], p[j]);
    std::vector<long double> dist(n, 1e300L);
    dist[s] = 0;
    using Item = std::pair<long double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, s});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (std::size_t w = 0; w < n; ++w)
            if (vis[u][w] && d + length(p[u], p[w]) < dist[w]) {
                dist[w] = d + length(p[u], p[w]);
                pq.push({dist[w], w});
            }
    }
    return dist;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
    EXPECT_EQ(to_string(parse_rational("-10/5")), "-2");
    EXPECT_THROW(parse_rational("1/0"), GeometryError);
    EXPECT_THROW(parse_rational("abc"), GeometryError);
}

TEST(Orientation, Basic) {
    EXPECT_EQ(orientation(Point(0, 0), Point(1, 0), Point(0, 1)), Orientation::CCW);
    EXPECT_EQ(orientation(Point(0, 0), Point(1, 1), Point(2, 2)), Orientation::COLLINEAR);
    EXPECT_EQ(orientation(Point(0, 0), Point(0, 1), Point(1, 1)), Orientation::CW);
}

TEST(Orientation, FilterAgreesWithExactSignNearDegeneracy) {
    std::mt19937_64 rng(91);
    auto coord = [&](long range) { return Rational(static_cast<long>(rng() % (2 * range + 1)) - range); };
    for (int it = 0; it < 20000; ++it) {
        const long range = it % 2 ? 1000 : 1'000'000'000;
        Point p{coord(range), coord(range)}, q{coord(range), coord(range)};
        // r on the line pq, then nudged by a tiny rational or huge offset
        Rational t(static_cast<long>(rng() % 2001) - 1000, 7);
        Rational nudge = it % 3 == 0 ? Rational(0) : Rational(static_cast<long>(rng() % 5) - 2, 1'000'000'007L);
        if (it % 7 == 0) nudge *= Rational(1'000'000'000'000L);
        Point r{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y) + nudge};
        ASSERT_EQ(orient(p, q, r), sgn(cross3(p, q, r))) << it;
        ASSERT_EQ(coord_greater(r.fy, r.y, p.fy, p.y), r.y > p.y) << it;
        const Rational shifted = p.y + nudge;
        ASSERT_EQ(coord_greater(p.fy, p.y, to_double(shifted), shifted), p.y > shifted) << it;
    }
}

TEST(Polygon, LocationUnitSquare) {
    auto sq = unit_square();
    EXPECT_EQ(point_location(sq, Point(Rational(1, 2), Rational(1, 2))), Location::INTERIOR);
    EXPECT_EQ(point_location(sq, Point(Rational(0), Rational(1, 2))), Location::BOUNDARY);
    EXPECT_EQ(point_location(sq, Point(2, 0)), Location::EXTERIOR);
}

TEST(Polygon, ValidationRejectsBadInput) {
    EXPECT_THROW(poly_of({{0, 0}, {1, 0}}), GeometryError);
    EXPECT_THROW(poly_of({{0, 0}, {2, 2}, {2, 0}, {0, 2}}), GeometryError);  // bow tie
    EXPECT_THROW(poly_of({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), GeometryError);  // collinear
    EXPECT_NO_THROW(poly_of({{0, 0}, {1, 0}, {2, 0}, {1, 1}}, {.allow_collinear = true}));
    auto cw = poly_of({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    EXPECT_TRUE(cw.was_reversed());
    EXPECT_GT(cw.area2(), 0);
}

TEST(Sees, AdjacentAndConvex) {
    auto sq = unit_square();
    EXPECT_TRUE(sees(sq, 0, 2));
    auto p = fig7a();
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_TRUE(sees(p, i, p.next(i)));
    EXPECT_THROW(sees(sq, Point(0, 0), Point(5, 5)), GeometryError);
}

TEST(Sees, Fig7aMatrixMatchesOracle) {
    auto p = fig7a();
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) EXPECT_EQ(sees(p, i, j), sees_oracle(p, p[i], p[j])) << i << "," << j;
}

TEST(Sees, SymmetricOnRandomPairs) {
    std::mt19937 rng(7);
    for (int it = 0; it < 20; ++it) {
        auto p = random_star(rng, 12);
        for (int k = 0; k < 20; ++k) {
            Point a = random_point_in(p, rng), b = random_point_in(p, rng);
            bool s = sees(p, a, b);
            EXPECT_EQ(s, sees(p, b, a));
            EXPECT_EQ(s, sees_oracle(p, a, b));
        }
    }
}

TEST(Sees, GrazingReflexVertexCounts) {
    // line from (0,0) to (20,20) touches the reflex corner (10,10)
    auto p = l_hexagon();
    EXPECT_TRUE(sees(p, Point(0, 0), Point(10, 10)));
    EXPECT_TRUE(sees(p, Point(5, 0), Point(10, 15)));
    EXPECT_FALSE(sees(p, Point(20, 5), Point(5, 20)));
}

TEST(Reflex, Comb) {
    auto p = comb();
    EXPECT_FALSE(is_reflex(p, 0));
    EXPECT_TRUE(is_reflex(p, 1));
    EXPECT_TRUE(is_reflex(p, 6));
}

TEST(VisibilityPolygon, ConvexIsItself) {
    auto sq = poly_of({{0, 0}, {4, 0}, {5, 3}, {1, 4}});
    for (std::size_t v = 0; v < sq.size(); ++v) EXPECT_EQ(visibility_polygon_vertex(sq, v).area2(), sq.area2());
    for (std::size_t e = 0; e < sq.size(); ++e) EXPECT_EQ(visibility_polygon_edge(sq, e).area2(), sq.area2());
}

TEST(VisibilityPolygon, CombCornerExcludesPockets) {
    auto p = comb();
    auto vp = visibility_polygon_vertex(p, 0);
    EXPECT_LT(vp.area2(), p.area2());
    std::mt19937 rng(3);
    for (int k = 0; k < 300; ++k) {
        Point q = random_point_in(p, rng);
        EXPECT_EQ(vp.locate(q) != Location::EXTERIOR, sees_oracle(p, p[0], q));
    }
}

TEST(VisibilityPolygon, VertexMatchesSamplingOracle) {
    std::mt19937 rng(11);
    for (int it = 0; it < 8; ++it) {
        auto p = random_star(rng, 14);
        for (std::size_t v = 0; v < p.size(); v += 3) {
            auto lp = visibility_polygon_point(p, p[v]);
            const auto& vp = lp.poly;
            EXPECT_NE(vp.locate(p[v]), Location::EXTERIOR);
            for (std::size_t k = 0; k < vp.size(); ++k) {
                EXPECT_NE(p.locate(vp[k]), Location::EXTERIOR);
                EXPECT_TRUE(sees(p, p[v], vp[k]));
                if (lp.origin[k] < 0) EXPECT_EQ(p.locate(vp[k]), Location::BOUNDARY);
            }
            for (int s = 0; s < 60; ++s) {
                Point q = random_point_in(p, rng);
                EXPECT_EQ(vp.locate(q) != Location::EXTERIOR, sees_oracle(p, p[v], q));
            }
        }
    }
}

TEST(VisibilityPolygon, EdgeMatchesSamplingOracle) {
    std::mt19937 rng(12);
    for (int it = 0; it < 10; ++it) {
        auto p = random_star(rng, 12);
        for (std::size_t e = 0; e < p.size(); e += 4) {
            auto vp = visibility_polygon_edge(p, e);
            EXPECT_EQ(vp[0], p[e]);
            EXPECT_EQ(vp[1], p[p.next(e)]);
            for (int s = 0; s < 40; ++s) {
                Point q = random_point_in(p, rng);
                // oracle: q sees one of 65 evenly spaced points of e, or the exact interval says no
                bool any = false;
                for (int k = 0; k <= 64 && !any; ++k) any = sees_oracle(p, q, lerp(p[e], p[p.next(e)], Rational(k, 64)));
                bool in = vp.locate(q) != Location::EXTERIOR;
                if (any) EXPECT_TRUE(in);
                EXPECT_EQ(in, weakly_sees_edge(p, e, q));
            }
        }
    }
}

TEST(VisibilityPolygon, CombBottomEdgeIsProperSubpolygon) {
    auto p = comb();
    auto vp = visibility_polygon_edge(p, 0);
    EXPECT_LT(vp.area2(), p.area2());
    EXPECT_FALSE(is_weakly_visible(p, 0));
}

TEST(Geodesic, ConvexAndVisibleAreStraight) {
    auto sq = poly_of({{0, 0}, {4, 0}, {5, 3}, {1, 4}});
    auto g = geodesic(sq, Point(0, 0), Point(5, 3));
    EXPECT_EQ(g.points.size(), 2u);
    auto spt = shortest_path_tree(sq, 1);
    for (std::size_t w = 0; w < sq.size(); ++w)
        if (w != 1) EXPECT_EQ(spt.parent[w], 1);
}

TEST(Geodesic, LHexagonTurnsAtReflexCorner) {
    auto p = l_hexagon();
    EXPECT_EQ(geodesic(p, Point(19, 1), Point(1, 19)).points.size(), 2u);  // grazes the corner
    auto g = geodesic(p, Point(19, 2), Point(2, 19));
    ASSERT_EQ(g.points.size(), 3u);
    EXPECT_EQ(g.points[1], Point(10, 10));
    EXPECT_THROW(geodesic(p, Point(30, 30), Point(1, 1)), GeometryError);
}

TEST(Geodesic, TreeLengthsMatchVisibilityGraphDijkstra) {
    std::mt19937 rng(5);
    for (int it = 0; it < 6; ++it) {
        auto p = random_star(rng, 20);
        for (std::size_t s = 0; s < p.size(); s += 7) {
            auto spt = shortest_path_tree(p, s);
            auto ref = dijkstra_lengths(p, s);
            for (std::size_t w = 0; w < p.size(); ++w) {
                auto path = spt.path_to_root(w);
                long double len = 0;
                for (std::size_t k = 0; k + 1 < path.size(); ++k) len += length(p[path[k]], p[path[k + 1]]);
                EXPECT_NEAR(static_cast<double>(len), static_cast<double>(ref[w]), 1e-6);
                for (std::size_t k = 1; k + 1 < path.size(); ++k) EXPECT_TRUE(p.is_reflex(path[k]));
            }
        }
    }
}
