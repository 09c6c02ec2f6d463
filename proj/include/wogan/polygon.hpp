#pragma once

#include <span>
#include <vector>

#include "wogan/geometry.hpp"

namespace wogan {

using Polygon = std::vector<Vec2>;

/// Signed shoelace area; positive for counter-clockwise vertex order.
double signed_area(std::span<const Vec2> poly);

inline double area(std::span<const Vec2> poly) {
    const double a = signed_area(poly);
    return a < 0 ? -a : a;
}

/// Sutherland-Hodgman: clips `subject` against a convex `clip` polygon of
/// either orientation. Returns the (possibly empty) intersection polygon.
Polygon clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip);

/// Area of the intersection of two convex polygons.
double intersection_area(std::span<const Vec2> a, std::span<const Vec2> b);

/// Rectangle of size length x width centered on `center`, long side along
/// `heading`, counter-clockwise.
Polygon oriented_rectangle(Vec2 center, double heading, double length, double width);

} // namespace wogan
