#include "wogan/polygon.hpp"

#include <cmath>

namespace wogan {

double signed_area(std::span<const Vec2> poly) {
    if (poly.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) twice += poly[i].cross(poly[(i + 1) % poly.size()]);
    return 0.5 * twice;
}

Polygon clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip) {
    Polygon output(subject.begin(), subject.end());
    if (clip.size() < 3) return {};
    const double orient = signed_area(clip) >= 0.0 ? 1.0 : -1.0;

    Polygon input;
    for (std::size_t e = 0; e < clip.size() && !output.empty(); ++e) {
        const Vec2 a = clip[e];
        const Vec2 b = clip[(e + 1) % clip.size()];
        const Vec2 edge = b - a;
        auto side = [&](Vec2 p) { return orient * edge.cross(p - a); };

        input.swap(output);
        output.clear();
        for (std::size_t i = 0; i < input.size(); ++i) {
            const Vec2 cur = input[i];
            const Vec2 prev = input[(i + input.size() - 1) % input.size()];
            const double sc = side(cur);
            const double sp = side(prev);
            if (sc >= 0.0) {
                if (sp < 0.0) output.push_back(prev + (cur - prev) * (sp / (sp - sc)));
                output.push_back(cur);
            } else if (sp >= 0.0) {
                output.push_back(prev + (cur - prev) * (sp / (sp - sc)));
            }
        }
    }
    return output;
}

double intersection_area(std::span<const Vec2> a, std::span<const Vec2> b) {
    const Polygon clipped = clip_convex(a, b);
    return area(clipped);
}

Polygon oriented_rectangle(Vec2 center, double heading, double length, double width) {
    const Vec2 f = direction(heading) * (length / 2.0);
    const Vec2 l = Vec2{-std::sin(heading), std::cos(heading)} * (width / 2.0);
    return {center - f - l, center + f - l, center + f + l, center - f + l};
}

} // namespace wogan
