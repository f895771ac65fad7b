#include <gtest/gtest.h>

#include "cfguard/decomposition.hpp"
#include "cfguard/instances.hpp"
#include "cfguard/verification.hpp"

using namespace cfguard;

namespace {

std::vector<Point> ring_of(const SimplePolygon& P) { return {P.vertices().begin(), P.vertices().end()}; }

}  // namespace

TEST(Gallery, EveryIdBuildsAValidPolygon) {
    const std::map<std::string, std::size_t> sizes{{"fig3", 17}, {"fig7a", 6}, {"bowl", 20}};
    for (const auto& id : gallery_ids()) {
        SimplePolygon P;
        ASSERT_NO_THROW(P = gallery(id)) << id;
        EXPECT_GT(P.area(), 0) << id;
        auto e = gallery_base(id);
        EXPECT_LT(e, P.size()) << id;
        if (auto it = sizes.find(id); it != sizes.end()) EXPECT_EQ(P.size(), it->second) << id;
    }
    EXPECT_THROW(gallery("nope"), GeometryError);
}

TEST(Gallery, FunnelFiguresClassify) {
    for (const char* id : {"fig2", "fig3", "fig4"}) EXPECT_TRUE(classify_funnel(gallery(id))) << id;
    EXPECT_TRUE(is_weakly_visible(gallery("fig5"), gallery_base("fig5")));
}

TEST(Gallery, BowlDoorIsTheFirstEdge) {
    auto B = gallery("bowl");
    EXPECT_EQ(gallery_base("bowl"), 0u);
    EXPECT_EQ(B[0], (Point{-6, -30}));
    EXPECT_EQ(B[1], (Point{6, -30}));
}

TEST(Generators, Deterministic) {
    EXPECT_EQ(ring_of(random_funnel({7, 9, 11}).polygon), ring_of(random_funnel({7, 9, 11}).polygon));
    EXPECT_EQ(ring_of(random_simple_polygon({.seed = 42, .n = 30})), ring_of(random_simple_polygon({.seed = 42, .n = 30})));
    auto a = random_weak_visibility_polygon({.seed = 5});
    auto b = random_weak_visibility_polygon({.seed = 5});
    EXPECT_EQ(ring_of(a.polygon), ring_of(b.polygon));
    EXPECT_EQ(a.base, b.base);
    EXPECT_NE(ring_of(random_simple_polygon({.seed = 1, .n = 30})), ring_of(random_simple_polygon({.seed = 2, .n = 30})));
}

TEST(Generators, RandomFunnelsAreFunnels) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::size_t l = 2 + seed % 15, r = 2 + (seed * 7) % 15;
        auto f = random_funnel({seed, l, r});
        EXPECT_EQ(f.left.size() + f.right.size(), l + r);
        EXPECT_TRUE(classify_funnel(f.polygon)) << "seed " << seed;
    }
}

TEST(Generators, RandomSimplePolygonsAreValidAndDecomposable) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const std::size_t n = 3 + seed % 38;
        auto P = random_simple_polygon({.seed = seed, .n = n});
        ASSERT_EQ(P.size(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NE(orient(P[P.prev(i)], P[i], P[P.next(i)]), 0);
        if (seed % 4 == 0) EXPECT_NO_THROW(decompose(P)) << "seed " << seed;
    }
}

TEST(Generators, RandomWeakVisibilityPolygonsAreWeaklyVisible) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto inst = random_weak_visibility_polygon({.seed = seed, .max_n = 60});
        EXPECT_LE(inst.polygon.size(), 60u);
        EXPECT_TRUE(is_weakly_visible(inst.polygon, inst.base)) << "seed " << seed;
    }
}

TEST(Generators, TinyFunnelFamilyIsSmallAndValid) {
    auto fam = tiny_funnel_family(9);
    EXPECT_GT(fam.size(), 50u);
    for (const auto& f : fam) EXPECT_LE(f.polygon.size(), 9u);
}

TEST(Bowtie, DefaultPassesTheAudit) {
    BowtieLayout L;
    ASSERT_NO_THROW(L = bowtie_layout(Rational(1, 50), Rational(1, 4)));
    const auto& P = L.polygon;
    for (int k = 0; k < 4; ++k) {
        for (auto d : L.doors[k]) {
            EXPECT_TRUE(sees(P, L.t, d));
            EXPECT_TRUE(sees(P, L.t_prime, d));
        }
        for (auto b : L.bowls[k])
            for (std::size_t w = 0; w < P.size(); ++w) {
                bool inside = w == L.doors[k][0] || w == L.doors[k][1] ||
                              std::find(L.bowls[k].begin(), L.bowls[k].end(), w) != L.bowls[k].end();
                if (!inside) EXPECT_FALSE(sees(P, b, w));
            }
    }
    for (std::size_t x : {L.r[1], L.r[2], L.s[1], L.s[2]})
        EXPECT_NE(sees(P, x, L.t), sees(P, x, L.t_prime));
    EXPECT_EQ(ring_of(P), ring_of(bowtie_with_bowls()));
}

TEST(Bowtie, HugeDoorsAreRejected) {
    EXPECT_THROW(bowtie_with_bowls(Rational(1), Rational(1, 4)), RequirementsViolated);
    EXPECT_THROW(bowtie_with_bowls(Rational(0), Rational(1, 4)), GeometryError);
}
