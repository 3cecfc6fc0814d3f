#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "alphavol/convex_hull.hpp"
#include "alphavol/geom.hpp"
#include "alphavol/grid_index.hpp"
#include "alphavol/predicates.hpp"

using namespace alphavol;
constexpr double kPi = std::numbers::pi;

TEST(Point, RejectsNonFinite) {
    EXPECT_THROW(Point(std::nan(""), 0.0), std::invalid_argument);
    EXPECT_THROW(Point(0.0, INFINITY), std::invalid_argument);
    EXPECT_NO_THROW(Point(1.0, -2.0));
}

TEST(AngularInterval, NormalizesStart) {
    AngularInterval a(-kPi / 2, 1.0);
    EXPECT_NEAR(a.start(), 3 * kPi / 2, 1e-15);
    AngularInterval b(5 * kPi, 0.5);
    EXPECT_NEAR(b.start(), kPi, 1e-12);
    EXPECT_THROW(AngularInterval(0.0, -0.1), std::invalid_argument);
    EXPECT_THROW(AngularInterval(0.0, 7.0), std::invalid_argument);
    EXPECT_TRUE(AngularInterval::full().is_full());
    EXPECT_EQ(AngularInterval::full().extent(), kTwoPi);
}

TEST(Arc, PointsLieOnCircle) {
    const Arc arc{Point(0.3, -1.2), 0.7, AngularInterval(1.0, 2.5)};
    for (int i = 0; i <= 50; ++i) {
        const Point p = arc.point_at(arc.interval.start() + arc.interval.extent() * i / 50.0);
        EXPECT_NEAR(distance(p, arc.center), 0.7, 1e-9);
    }
}

TEST(CoveredInterval, TangentCirclesAreEmpty) {
    EXPECT_FALSE(circle_circle_covered_interval(Point(0, 0), Point(2, 0), 1.0).has_value());
    EXPECT_FALSE(circle_circle_covered_interval(Point(0, 0), Point(3, 0), 1.0).has_value());
}

TEST(CoveredInterval, HalfAngleAtDistanceRadius) {
    const auto iv = circle_circle_covered_interval(Point(0, 0), Point(0, 1), 1.0);
    ASSERT_TRUE(iv.has_value());
    EXPECT_NEAR(iv->extent(), 2 * kPi / 3, 1e-12);
    EXPECT_NEAR(iv->start(), kPi / 2 - kPi / 3, 1e-12);
}

TEST(CoveredInterval, NearlyCoincidentCoversHalf) {
    const auto iv = circle_circle_covered_interval(Point(0, 0), Point(1e-9, 0), 1.0);
    ASSERT_TRUE(iv.has_value());
    EXPECT_NEAR(iv->extent(), kPi, 1e-8);
    EXPECT_THROW(circle_circle_covered_interval(Point(1, 1), Point(1, 1), 1.0), DuplicateCenterError);
}

TEST(CoveredInterval, AgreesWithDirectDistanceAtSampledAngles) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0), ur(0.1, 1.5);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Point c1(u(rng), u(rng)), c2(u(rng), u(rng));
        const double r = ur(rng);
        const auto iv = circle_circle_covered_interval(c1, c2, r);
        for (int k = 0; k < 360; ++k) {
            const double t = kTwoPi * k / 360.0;
            const Point p(c1.x + r * std::cos(t), c1.y + r * std::sin(t));
            const bool inside = distance(p, c2) < r;
            const bool in_iv = iv && iv->contains(t, 0.0);
            if (inside == in_iv) continue;
            // only the 1e-9 band around the endpoints may disagree
            if (iv && (std::fabs(normalize_angle(t - iv->start())) < 1e-9 ||
                       std::fabs(normalize_angle(iv->end() - t)) < 1e-9))
                continue;
            ++mismatches;
        }
    }
    EXPECT_EQ(mismatches, 0);
}

TEST(MergeIntervals, Examples) {
    const auto m = merge_intervals({AngularInterval(0, kPi / 2), AngularInterval(kPi / 4, 3 * kPi / 4)});
    ASSERT_EQ(m.size(), 1u);
    EXPECT_NEAR(m[0].start(), 0.0, 1e-15);
    EXPECT_NEAR(m[0].extent(), kPi, 1e-15);
    EXPECT_TRUE(merge_intervals({}).empty());
}

TEST(MergeIntervals, WraparoundMatchesEnumeration) {
    const std::vector<AngularInterval> in{AngularInterval(3 * kPi / 2, kPi / 2), AngularInterval(0, kPi / 4)};
    const auto m = merge_intervals(in);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_NEAR(m[0].extent(), 3 * kPi / 4, 1e-12);
    for (int k = 0; k < 10000; ++k) {
        const double t = kTwoPi * (k + 0.5) / 10000.0;
        const bool want = std::any_of(in.begin(), in.end(), [&](const auto& iv) { return iv.contains(t, 0.0); });
        EXPECT_EQ(want, m[0].contains(t, 0.0)) << t;
    }
}

namespace {

std::vector<AngularInterval> random_intervals(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> s(0.0, kTwoPi), e(0.0, 1.5);
    std::vector<AngularInterval> v;
    for (int i = 0; i < count; ++i) v.emplace_back(s(rng), e(rng));
    return v;
}

bool covered(const std::vector<AngularInterval>& v, double t) {
    return std::any_of(v.begin(), v.end(), [&](const auto& iv) { return iv.contains(t, 0.0); });
}

}  // namespace

TEST(MergeIntervals, IdempotentAndCommutative) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        auto v = random_intervals(rng, 1 + trial % 7);
        const auto once = merge_intervals(v);
        const auto twice = merge_intervals(once);
        ASSERT_EQ(once.size(), twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) {
            EXPECT_NEAR(once[i].start(), twice[i].start(), 1e-12);
            EXPECT_NEAR(once[i].extent(), twice[i].extent(), 1e-12);
        }
        std::shuffle(v.begin(), v.end(), rng);
        const auto shuffled = merge_intervals(v);
        ASSERT_EQ(once.size(), shuffled.size());
        for (std::size_t i = 0; i < once.size(); ++i) {
            EXPECT_NEAR(once[i].start(), shuffled[i].start(), 1e-12);
            EXPECT_NEAR(once[i].extent(), shuffled[i].extent(), 1e-12);
        }
        // union semantics on a probe grid, away from endpoints
        for (int k = 0; k < 720; ++k) {
            const double t = kTwoPi * (k + 0.37) / 720.0;
            EXPECT_EQ(covered(v, t), covered(once, t));
        }
        // complement is disjoint from the union and fills the rest
        const auto comp = complement_intervals(once);
        for (int k = 0; k < 720; ++k) {
            const double t = kTwoPi * (k + 0.37) / 720.0;
            EXPECT_NE(covered(once, t), covered(comp, t)) << t;
        }
    }
}

TEST(CircularSegment, Examples) {
    EXPECT_NEAR(circular_segment_area(2.0, 4.0), kPi * 4.0 / 2.0, 1e-12);
    EXPECT_EQ(circular_segment_area(1.0, 0.0), 0.0);
    EXPECT_NEAR(circular_segment_area(1.0, 1.0), (kPi / 3 - std::sqrt(3.0) / 2) / 2, 1e-12);
    EXPECT_THROW(circular_segment_area(1.0, 2.5), std::invalid_argument);
}

TEST(CircularSegment, MatchesQuadratureOfCap) {
    // midpoint rule on the chord-to-arc height profile
    const double r = 1.3, chord = 0.9;
    const double d = std::sqrt(r * r - chord * chord / 4);
    const int steps = 200000;
    double sum = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double x = -chord / 2 + chord * (i + 0.5) / steps;
        sum += std::sqrt(r * r - x * x) - d;
    }
    EXPECT_NEAR(circular_segment_area(r, chord), sum * chord / steps, 1e-9);
    // tiny chords use the series branch
    const double tiny = 1e-5;
    const double phi = 2 * std::asin(tiny / 2);
    EXPECT_NEAR(circular_segment_area(1.0, tiny), std::pow(phi, 3) / 12, 1e-24);
}

TEST(Orientation, ExactOnNearDegenerateInput) {
    const Point a(0.5, 0.5), b(12.0, 12.0), c(24.0, 24.0);
    EXPECT_EQ(orientation(a, b, c), 0);
    const Point nudged(0.5 + std::ldexp(1.0, -53), 0.5);
    EXPECT_EQ(orientation(nudged, b, c), -1);
    EXPECT_EQ(orientation(Point(0, 0), Point(1, 0), Point(0, 1)), 1);
    // sweep tiny perturbations across the line y = x
    int wrong = 0;
    for (int i = -20; i <= 20; ++i) {
        const double y = 0.5 + i * std::ldexp(1.0, -54);
        const int s = orientation(Point(0.5, y), b, c);
        const int want = (y > 0.5) ? 1 : (y < 0.5 ? -1 : 0);
        if (s != want) ++wrong;
    }
    EXPECT_EQ(wrong, 0);
}

TEST(ConvexHull, Examples) {
    const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    EXPECT_DOUBLE_EQ(polygon_area(convex_hull(square)), 1.0);
    const std::vector<Point> tri{{0, 0}, {2, 0}, {0, 2}};
    EXPECT_DOUBLE_EQ(polygon_area(convex_hull(tri)), 2.0);
    EXPECT_THROW(convex_hull(std::vector<Point>{}), std::invalid_argument);
    const std::vector<Point> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    const auto h = convex_hull(line);
    EXPECT_EQ(h.size(), 2u);
    EXPECT_EQ(polygon_area(h), 0.0);
    EXPECT_EQ(polygon_area(convex_hull(std::vector<Point>{{4, 5}})), 0.0);
    // collinear points on edges are dropped
    const std::vector<Point> edge{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 2}};
    EXPECT_EQ(convex_hull(edge).size(), 4u);
}

TEST(ConvexHull, DiskSamplesStayBelowPiAndGrow) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&](int n) {
        std::vector<Point> v;
        for (int i = 0; i < n; ++i) {
            const double r = std::sqrt(u(rng)), t = kTwoPi * u(rng);
            v.emplace_back(r * std::cos(t), r * std::sin(t));
        }
        return v;
    };
    double small = 0.0, large = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const double a100 = polygon_area(convex_hull(draw(100)));
        const double a1000 = polygon_area(convex_hull(draw(1000)));
        EXPECT_LT(a1000, kPi);
        small += a100;
        large += a1000;
    }
    EXPECT_LT(small, large);
}

TEST(ConvexHull, InvariantUnderPermutation) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Point> v;
        for (int i = 0; i < 60; ++i) v.emplace_back(g(rng), g(rng));
        const double a = polygon_area(convex_hull(v));
        std::shuffle(v.begin(), v.end(), rng);
        EXPECT_NEAR(polygon_area(convex_hull(v)), a, 1e-12 * a);
        const auto h = convex_hull(v);
        const auto& vs = h.vertices();
        for (std::size_t i = 0; i < vs.size(); ++i)
            EXPECT_EQ(orientation(vs[i], vs[(i + 1) % vs.size()], vs[(i + 2) % vs.size()]), 1);
        for (const auto& p : v) EXPECT_TRUE(h.contains(p));
    }
}

TEST(PolygonArea, RegularPolygons) {
    for (int n : {3, 4, 7, 64, 1000}) {
        std::vector<Point> v;
        for (int i = 0; i < n; ++i) v.emplace_back(std::cos(kTwoPi * i / n), std::sin(kTwoPi * i / n));
        EXPECT_NEAR(polygon_area(convex_hull(v)), n / 2.0 * std::sin(kTwoPi / n), 1e-12) << n;
    }
    EXPECT_EQ(polygon_area(ConvexPolygon({Point(1, 1), Point(2, 3)})), 0.0);
}

TEST(GridIndex, QueryIsSupersetOfBallAndBucketsMatchCoordinates) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 5.0);
    std::vector<Point> pts;
    for (int i = 0; i < 2000; ++i) pts.emplace_back(u(rng), u(rng));
    const GridIndex g(pts, 0.37);
    for (std::int64_t cy = 0; cy < g.rows(); ++cy)
        for (std::int64_t cx = 0; cx < g.columns(); ++cx)
            for (auto idx : g.bucket(cx, cy)) {
                const auto [px, py] = g.cell_coords(pts[idx]);
                EXPECT_EQ(px, cx);
                EXPECT_EQ(py, cy);
            }
    for (int q = 0; q < 200; ++q) {
        const Point c(u(rng) * 1.5, u(rng) * 1.5);
        const double r = 0.05 + 0.01 * q;
        auto got = g.query(c, r);
        std::sort(got.begin(), got.end());
        for (std::uint32_t i = 0; i < pts.size(); ++i)
            if (distance(pts[i], c) <= r) {
                EXPECT_TRUE(std::binary_search(got.begin(), got.end(), i));
            }
    }
    EXPECT_THROW(GridIndex(pts, 0.0), std::invalid_argument);
}
