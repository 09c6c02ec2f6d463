#include <gtest/gtest.h>

#include <cmath>

#include "wogan/polygon.hpp"

using namespace wogan;

namespace {

Polygon square(double x0, double y0, double side) {
    return {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}};
}

} // namespace

TEST(Polygon, ShoelaceArea) {
    const Polygon sq = square(0, 0, 2);
    EXPECT_DOUBLE_EQ(signed_area(sq), 4.0);
    const Polygon cw(sq.rbegin(), sq.rend());
    EXPECT_DOUBLE_EQ(signed_area(cw), -4.0);
    EXPECT_DOUBLE_EQ(area(cw), 4.0);
    const Polygon tri{{0, 0}, {4, 0}, {0, 3}};
    EXPECT_DOUBLE_EQ(area(tri), 6.0);
}

TEST(Polygon, ClipOverlappingSquares) {
    EXPECT_NEAR(intersection_area(square(0, 0, 2), square(1, 1, 2)), 1.0, 1e-12);
    EXPECT_NEAR(intersection_area(square(0, 0, 2), square(0.5, 0, 2)), 3.0, 1e-12);
}

TEST(Polygon, ClipDisjointIsEmpty) {
    EXPECT_TRUE(clip_convex(square(0, 0, 1), square(5, 5, 1)).empty());
    EXPECT_DOUBLE_EQ(intersection_area(square(0, 0, 1), square(5, 5, 1)), 0.0);
}

TEST(Polygon, ClipContained) {
    EXPECT_NEAR(intersection_area(square(1, 1, 1), square(0, 0, 4)), 1.0, 1e-12);
    EXPECT_NEAR(intersection_area(square(0, 0, 4), square(1, 1, 1)), 1.0, 1e-12);
}

TEST(Polygon, ClipOrientationIndependent) {
    const Polygon a = square(0, 0, 2);
    const Polygon b = square(1, 0.5, 2);
    const Polygon b_cw(b.rbegin(), b.rend());
    EXPECT_NEAR(intersection_area(a, b), intersection_area(a, b_cw), 1e-12);
}

TEST(Polygon, RotatedSquareOverlap) {
    // Unit square against a diamond of the same center: overlap is the
    // regular octagon of area 2(sqrt(2) - 1).
    const Polygon sq = square(-0.5, -0.5, 1);
    const Polygon diamond = oriented_rectangle({0, 0}, M_PI / 4, 1, 1);
    EXPECT_NEAR(intersection_area(sq, diamond), 2.0 * (std::sqrt(2.0) - 1.0), 1e-12);
}

TEST(Polygon, OrientedRectangle) {
    const Polygon r = oriented_rectangle({10, 5}, M_PI / 2, 4.4, 1.8);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_NEAR(signed_area(r), 4.4 * 1.8, 1e-12);
    double max_y = -1e9, max_x = -1e9;
    for (const Vec2& p : r) {
        max_y = std::max(max_y, p.y);
        max_x = std::max(max_x, p.x);
    }
    EXPECT_NEAR(max_y, 5 + 2.2, 1e-12);
    EXPECT_NEAR(max_x, 10 + 0.9, 1e-12);
}
