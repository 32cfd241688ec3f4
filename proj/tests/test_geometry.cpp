#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "edgeelim/geometry.hpp"
#include "edgeelim/random.hpp"

using namespace edgeelim;

namespace {

Point random_point(SplitMix64& rng) { return {rng.uniform(), rng.uniform()}; }

double line_distance(Point p, Point q, Point x) {
    // Independent formula: twice the triangle area over the base length.
    const double area2 = std::abs((q.x - p.x) * (x.y - p.y) - (q.y - p.y) * (x.x - p.x));
    return area2 / std::sqrt((q.x - p.x) * (q.x - p.x) + (q.y - p.y) * (q.y - p.y));
}

}  // namespace

TEST(Dist, PythagoreanTriple) { EXPECT_DOUBLE_EQ(dist({0, 0}, {3, 4}), 5.0); }

TEST(Dist, IdenticalPoints) { EXPECT_EQ(dist({0.37, 0.37}, {0.37, 0.37}), 0.0); }

TEST(Dist, SqrtOfPointTwoSix) {
    // (0.5)^2 + (0.1)^2 = 0.26.
    EXPECT_NEAR(dist({0.5, 0.1}, {1, 0}), 0.5099019513592785, 1e-15);
}

TEST(Dist, TriangleInequalityOnRandomTriples) {
    SplitMix64 rng(42);
    for (int k = 0; k < 10000; ++k) {
        const Point a = random_point(rng), b = random_point(rng), c = random_point(rng);
        EXPECT_LE(dist(a, c), dist(a, b) + dist(b, c) + 1e-12);
    }
}

TEST(Project, AxisAligned) {
    const ProjectedFrame f({{0, 0}, {1, 0}});
    const Point x = f.project({0.3, 0.7});
    EXPECT_NEAR(x.x, 0.3, 1e-15);
    EXPECT_NEAR(x.y, 0.0, 1e-15);
}

TEST(Project, PointOnLineIsFixed) {
    const ProjectedFrame f({{0.1, 0.2}, {0.7, 0.5}});
    const Point on{0.1 + 0.6 * 0.4, 0.2 + 0.3 * 0.4};
    const Point x = f.project(on);
    EXPECT_NEAR(x.x, on.x, 1e-15);
    EXPECT_NEAR(x.y, on.y, 1e-15);
}

TEST(Project, DiagonalLine) {
    const ProjectedFrame f({{0, 0}, {1, 1}});
    const Point x = f.project({1, 0});
    EXPECT_NEAR(x.x, 0.5, 1e-15);
    EXPECT_NEAR(x.y, 0.5, 1e-15);
}

TEST(Project, Idempotent) {
    SplitMix64 rng(7);
    for (int k = 0; k < 1000; ++k) {
        const Point p = random_point(rng), q = random_point(rng), x = random_point(rng);
        if (dist(p, q) < 1e-3) continue;
        const ProjectedFrame f({p, q});
        const Point once = f.project(x), twice = f.project(once);
        EXPECT_LE(dist(once, twice), 1e-12);
        EXPECT_NEAR(f.distance_to_line(x), line_distance(p, q, x), 1e-12);
    }
}

TEST(Project, DegenerateSegmentThrows) {
    EXPECT_THROW(ProjectedFrame({{0.2, 0.2}, {0.2, 0.2}}), GeometryError);
}

TEST(DistXY, ParallelOffset) {
    const ProjectedFrame f({{0, 0}, {1, 0}});
    EXPECT_NEAR(f.dist_x({0.2, 0.3}, {0.6, 0.3}), 0.4, 1e-15);
    EXPECT_NEAR(f.dist_y({0.2, 0.3}, {0.6, 0.3}), 0.0, 1e-15);
}

TEST(DistXY, SamePoint) {
    const ProjectedFrame f({{0.1, 0.1}, {0.8, 0.3}});
    EXPECT_EQ(f.dist_x({0.4, 0.4}, {0.4, 0.4}), 0.0);
    EXPECT_EQ(f.dist_y({0.4, 0.4}, {0.4, 0.4}), 0.0);
}

TEST(DistXY, CoordinateArithmetic) {
    const ProjectedFrame f({{0, 0}, {1, 0}});
    EXPECT_NEAR(f.dist_x({0.1, 0.5}, {0.4, 0.2}), 0.3, 1e-15);
    EXPECT_NEAR(f.dist_y({0.1, 0.5}, {0.4, 0.2}), 0.3, 1e-15);
}

TEST(RayCircle, Examples) {
    Point x = ray_circle_point({0, 0}, {2, 0}, 1.0);
    EXPECT_NEAR(x.x, 1.0, 1e-15);
    EXPECT_NEAR(x.y, 0.0, 1e-15);
    x = ray_circle_point({0, 0}, {1, 1}, std::sqrt(2.0));
    EXPECT_NEAR(x.x, 1.0, 1e-15);
    EXPECT_NEAR(x.y, 1.0, 1e-15);
    x = ray_circle_point({1, 1}, {1, 3}, 0.5);
    EXPECT_NEAR(x.x, 1.0, 1e-15);
    EXPECT_NEAR(x.y, 1.5, 1e-15);
}

TEST(RayCircle, Preconditions) {
    EXPECT_THROW(ray_circle_point({0.5, 0.5}, {0.5, 0.5}, 1.0), GeometryError);
    EXPECT_THROW(ray_circle_point({0, 0}, {1, 0}, 0.0), GeometryError);
}

TEST(CircleCircle, Tangent) {
    const auto pts = circle_circle_intersection({0, 0}, 1, {2, 0}, 1);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_NEAR(pts[0].x, 1.0, 1e-12);
    EXPECT_NEAR(pts[0].y, 0.0, 1e-12);
}

TEST(CircleCircle, Disjoint) { EXPECT_TRUE(circle_circle_intersection({0, 0}, 1, {3, 0}, 1).empty()); }

TEST(CircleCircle, Nested) { EXPECT_TRUE(circle_circle_intersection({0, 0}, 2, {0.1, 0}, 0.5).empty()); }

TEST(CircleCircle, EquilateralOrderedLeftFirst) {
    const auto pts = circle_circle_intersection({0, 0}, 1, {1, 0}, 1);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_NEAR(pts[0].x, 0.5, 1e-15);
    EXPECT_NEAR(pts[0].y, std::sqrt(3.0) / 2.0, 1e-15);
    EXPECT_NEAR(pts[1].x, 0.5, 1e-15);
    EXPECT_NEAR(pts[1].y, -std::sqrt(3.0) / 2.0, 1e-15);
}

TEST(CircleCircle, IdenticalCirclesThrow) {
    EXPECT_THROW(circle_circle_intersection({0.3, 0.3}, 0.2, {0.3, 0.3}, 0.2), GeometryError);
}

TEST(CircleCircle, ResidualsOnRandomCircles) {
    SplitMix64 rng(99);
    int checked = 0;
    for (int k = 0; k < 5000; ++k) {
        const Point c1 = random_point(rng), c2 = random_point(rng);
        const double r1 = 0.05 + rng.uniform(), r2 = 0.05 + rng.uniform();
        for (const Point& x : circle_circle_intersection(c1, r1, c2, r2)) {
            EXPECT_LT(std::abs(dist(x, c1) - r1), 1e-10);
            EXPECT_LT(std::abs(dist(x, c2) - r2), 1e-10);
            ++checked;
        }
    }
    EXPECT_GT(checked, 1000);
}

TEST(Angle, Examples) {
    EXPECT_NEAR(angle({1, 0}, {0, 0}, {0, 1}), std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(angle({1, 0}, {0, 0}, {2, 0}), 0.0, 1e-15);
    EXPECT_NEAR(angle({1, 0}, {0, 0}, {-1, 1}), 3 * std::numbers::pi / 4, 1e-15);
}

TEST(Angle, ClampedForNearlyCollinear) {
    const double a = angle({1e-9, 0}, {0, 0}, {1, 1e-17});
    EXPECT_TRUE(std::isfinite(a));
    EXPECT_NEAR(a, 0.0, 1e-8);
}

TEST(ReflectionLemma, RandomTriples) {
    // dist(p,r) + dist(r,q) >= sqrt(dist(p,q)^2 + (2 dist(r, line pq))^2).
    SplitMix64 rng(2024);
    for (int k = 0; k < 10000; ++k) {
        const Point p = random_point(rng), q = random_point(rng), r = random_point(rng);
        if (dist(p, q) < 1e-6) continue;
        const double h = line_distance(p, q, r);
        EXPECT_GE(dist(p, r) + dist(r, q), std::sqrt(dist(p, q) * dist(p, q) + 4 * h * h) - 1e-9);
    }
}

TEST(Reflect, ThroughCenter) {
    const Point x = reflect_through({0.2, 0.3}, {0.5, 0.5});
    EXPECT_NEAR(x.x, 0.8, 1e-15);
    EXPECT_NEAR(x.y, 0.7, 1e-15);
}
