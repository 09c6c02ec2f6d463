#include "wogan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "wogan/errors.hpp"

namespace wogan {

namespace {

// Dense sub-steps per spline segment used to measure arc length before
// resampling.
constexpr int kDenseSteps = 64;

// Points closer than this are treated as coincident.
constexpr double kCoincident = 1e-9;

// Tolerance on the map bounds, absorbs rounding at the start point.
constexpr double kMapSlack = 1e-9;

Vec2 right_normal(double heading) { return {std::sin(heading), -std::cos(heading)}; }

// Barry-Goldman evaluation of a centripetal Catmull-Rom segment between p1
// and p2 at parameter u in [0, 1].
Vec2 catmull_rom(Vec2 p0, Vec2 p1, Vec2 p2, Vec2 p3, double u) {
    auto knot = [](double t, Vec2 a, Vec2 b) { return t + std::sqrt(std::max(distance(a, b), kCoincident)); };
    const double t0 = 0.0;
    const double t1 = knot(t0, p0, p1);
    const double t2 = knot(t1, p1, p2);
    const double t3 = knot(t2, p2, p3);
    const double t = t1 + u * (t2 - t1);

    const Vec2 a1 = p0 * ((t1 - t) / (t1 - t0)) + p1 * ((t - t0) / (t1 - t0));
    const Vec2 a2 = p1 * ((t2 - t) / (t2 - t1)) + p2 * ((t - t1) / (t2 - t1));
    const Vec2 a3 = p2 * ((t3 - t) / (t3 - t2)) + p3 * ((t - t2) / (t3 - t2));
    const Vec2 b1 = a1 * ((t2 - t) / (t2 - t0)) + a2 * ((t - t0) / (t2 - t0));
    const Vec2 b2 = a2 * ((t3 - t) / (t3 - t1)) + a3 * ((t - t1) / (t3 - t1));
    return b1 * ((t2 - t) / (t2 - t1)) + b2 * ((t - t1) / (t2 - t1));
}

// Phantom knot beyond the end `b` of the chord a -> b. It repeats the turn
// the spline makes at `a` (from the neighbour `c` before it), so constant
// curvature carries through the end segments. `c` equal to the straight
// continuation gives the usual linear reflection.
Vec2 phantom(Vec2 a, Vec2 b, Vec2 c) {
    const Vec2 u = a - c;
    const Vec2 v = b - a;
    const double turn = std::atan2(u.cross(v), u.dot(v));
    const double cs = std::cos(turn), sn = std::sin(turn);
    return b + Vec2{v.x * cs - v.y * sn, v.x * sn + v.y * cs};
}

std::vector<Vec2> dedupe(std::span<const Vec2> points) {
    std::vector<Vec2> out;
    out.reserve(points.size());
    for (const Vec2& p : points) {
        if (out.empty() || distance(out.back(), p) > kCoincident) out.push_back(p);
    }
    return out;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + ab * t);
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = (b - a).cross(c - a);
    const double d2 = (b - a).cross(d - a);
    const double d3 = (d - c).cross(a - c);
    const double d4 = (d - c).cross(b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

double segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    if (segments_cross(a, b, c, d)) return 0.0;
    return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                     point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

// Any two centerline segments separated by more than this much arc must stay
// road_width apart.
double min_loop_arc(const GeometryConfig& cfg) { return 3.0 * cfg.road_width; }

bool self_intersects(const RoadPolyline& road, const GeometryConfig& cfg) {
    const auto& c = road.centerline;
    if (c.size() < 4) return false;
    const std::size_t nseg = c.size() - 1;

    std::vector<double> arc(c.size(), 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) arc[i] = arc[i - 1] + distance(c[i - 1], c[i]);

    // Uniform grid hash over segment bounding boxes inflated by road_width.
    const double cell = std::max(cfg.road_width, 1.0);
    auto key = [](long ix, long iy) { return (static_cast<long long>(ix) << 32) ^ static_cast<unsigned long>(iy); };
    std::unordered_map<long long, std::vector<std::size_t>> grid;
    grid.reserve(nseg * 2);

    const double gap = min_loop_arc(cfg);
    for (std::size_t j = 0; j < nseg; ++j) {
        const Vec2 a = c[j];
        const Vec2 b = c[j + 1];
        const long x0 = static_cast<long>(std::floor((std::min(a.x, b.x) - cfg.road_width) / cell));
        const long x1 = static_cast<long>(std::floor((std::max(a.x, b.x) + cfg.road_width) / cell));
        const long y0 = static_cast<long>(std::floor((std::min(a.y, b.y) - cfg.road_width) / cell));
        const long y1 = static_cast<long>(std::floor((std::max(a.y, b.y) + cfg.road_width) / cell));

        // Check candidates already in the grid (all have smaller index).
        std::vector<std::size_t> seen;
        for (long ix = x0; ix <= x1; ++ix) {
            for (long iy = y0; iy <= y1; ++iy) {
                auto it = grid.find(key(ix, iy));
                if (it == grid.end()) continue;
                for (std::size_t i : it->second) {
                    if (arc[j] - arc[i + 1] <= gap) continue;
                    if (std::find(seen.begin(), seen.end(), i) != seen.end()) continue;
                    seen.push_back(i);
                    if (segment_distance(c[i], c[i + 1], a, b) < cfg.road_width) return true;
                }
            }
        }
        const long cx0 = static_cast<long>(std::floor(std::min(a.x, b.x) / cell));
        const long cx1 = static_cast<long>(std::floor(std::max(a.x, b.x) / cell));
        const long cy0 = static_cast<long>(std::floor(std::min(a.y, b.y) / cell));
        const long cy1 = static_cast<long>(std::floor(std::max(a.y, b.y) / cell));
        for (long ix = cx0; ix <= cx1; ++ix)
            for (long iy = cy0; iy <= cy1; ++iy) grid[key(ix, iy)].push_back(j);
    }
    return false;
}

} // namespace

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

bool CurvatureTest::in_range() const {
    return std::all_of(kappas.begin(), kappas.end(),
                       [](double k) { return std::isfinite(k) && std::abs(k) <= kMaxCurvature; });
}

void GeometryConfig::validate() const {
    if (!(map_size > 0.0)) throw ConfigError("geometry.map_size must be positive");
    if (!(step_length > 0.0)) throw ConfigError("geometry.step_length must be positive");
    if (samples_per_segment < 1) throw ConfigError("geometry.samples_per_segment must be >= 1");
    if (!(lane_width > 0.0) || lane_width > road_width)
        throw ConfigError("geometry.lane_width must satisfy 0 < lane_width <= road_width");
    if (std::abs(lane_offset) + lane_width / 2.0 > road_width / 2.0 + 1e-12)
        throw ConfigError("geometry.lane_offset places the lane outside the road");
}

double RoadPolyline::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < centerline.size(); ++i) total += distance(centerline[i - 1], centerline[i]);
    return total;
}

std::string to_string(Violation v) {
    switch (v) {
    case Violation::OutOfMap: return "OutOfMap";
    case Violation::SelfIntersection: return "SelfIntersection";
    case Violation::SharpTurn: return "SharpTurn";
    case Violation::TooShort: return "TooShort";
    }
    return "Unknown";
}

bool ValidityReport::has(Violation v) const {
    return std::find(violations.begin(), violations.end(), v) != violations.end();
}

std::vector<Vec2> curvature_to_points(const CurvatureTest& test, const GeometryConfig& cfg) {
    std::vector<Vec2> points;
    points.reserve(test.size() + 1);
    Vec2 p = cfg.start_point;
    double heading = cfg.start_heading;
    points.push_back(p);
    for (double kappa : test.kappas) {
        heading += kappa * cfg.step_length;
        p = p + direction(heading) * cfg.step_length;
        points.push_back(p);
    }
    return points;
}

RoadPolyline interpolate_polyline(std::span<const Vec2> points, const GeometryConfig& cfg) {
    std::vector<Vec2> knots = dedupe(points);
    if (knots.size() < 2) throw DegenerateInput("interpolation needs at least two distinct points");

    RoadPolyline road;
    road.control_points.assign(points.begin(), points.end());
    road.road_width = cfg.road_width;
    road.lane_width = cfg.lane_width;

    const double spacing = cfg.step_length / cfg.samples_per_segment;
    const std::size_t n = knots.size();
    road.centerline.push_back(knots.front());

    std::vector<Vec2> dense(kDenseSteps + 1);
    std::vector<double> arc(kDenseSteps + 1);
    for (std::size_t s = 0; s + 1 < n; ++s) {
        const Vec2 p1 = knots[s];
        const Vec2 p2 = knots[s + 1];
        const Vec2 p0 = s > 0 ? knots[s - 1] : phantom(p2, p1, n > 2 ? knots[2] : p2 * 2.0 - p1);
        const Vec2 p3 = s + 2 < n ? knots[s + 2] : phantom(p1, p2, n > 2 ? knots[n - 3] : p1 * 2.0 - p2);

        dense[0] = p1;
        arc[0] = 0.0;
        for (int k = 1; k <= kDenseSteps; ++k) {
            dense[k] = k == kDenseSteps ? p2 : catmull_rom(p0, p1, p2, p3, static_cast<double>(k) / kDenseSteps);
            arc[k] = arc[k - 1] + distance(dense[k - 1], dense[k]);
        }

        const double seg_len = arc.back();
        const int pieces = std::max(1, static_cast<int>(std::ceil(seg_len / spacing - 1e-9)));
        int k = 0;
        for (int q = 1; q < pieces; ++q) {
            const double target = seg_len * q / pieces;
            while (k + 1 < kDenseSteps && arc[k + 1] < target) ++k;
            const double span = arc[k + 1] - arc[k];
            const double w = span > 0.0 ? (target - arc[k]) / span : 0.0;
            road.centerline.push_back(dense[k] + (dense[k + 1] - dense[k]) * w);
        }
        road.centerline.push_back(p2);
    }

    // Drop any resampled point that coincides with its predecessor.
    road.centerline = dedupe(road.centerline);

    const auto& c = road.centerline;
    road.headings.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec2 a = c[i == 0 ? 0 : i - 1];
        const Vec2 b = c[i + 1 == c.size() ? i : i + 1];
        road.headings[i] = std::atan2(b.y - a.y, b.x - a.x);
    }

    road.lane_center.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) road.lane_center[i] = c[i] + right_normal(road.headings[i]) * cfg.lane_offset;
    return road;
}

ValidityReport validate_road(const RoadPolyline& road, const GeometryConfig& cfg) {
    ValidityReport report;
    auto flag = [&](Violation v) {
        report.violations.push_back(v);
        report.valid = false;
    };

    // Every centerline point must be on the map and so must both road edges,
    // except over the first road_width of arc where the road enters the map
    // from its start border.
    const double half = cfg.road_width / 2.0;
    const double lo = -kMapSlack;
    const double hi = cfg.map_size + kMapSlack;
    auto outside = [&](Vec2 p) { return p.x < lo || p.y < lo || p.x > hi || p.y > hi; };
    double arc = 0.0;
    for (std::size_t i = 0; i < road.centerline.size(); ++i) {
        if (i > 0) arc += distance(road.centerline[i - 1], road.centerline[i]);
        const Vec2 c = road.centerline[i];
        const Vec2 n = right_normal(road.headings[i]) * half;
        if (outside(c) || (arc >= cfg.road_width && (outside(c - n) || outside(c + n)))) {
            flag(Violation::OutOfMap);
            break;
        }
    }

    if (self_intersects(road, cfg)) flag(Violation::SelfIntersection);

    const std::vector<Vec2> knots = dedupe(road.control_points);
    for (std::size_t i = 2; i < knots.size(); ++i) {
        const Vec2 u = knots[i - 1] - knots[i - 2];
        const Vec2 v = knots[i] - knots[i - 1];
        const double turn = std::abs(std::atan2(u.cross(v), u.dot(v)));
        if (turn > cfg.sharp_turn_bound()) {
            flag(Violation::SharpTurn);
            break;
        }
    }

    if (road.length() < 2.0 * cfg.step_length - 1e-9) flag(Violation::TooShort);
    return report;
}

RoadPolyline road_from_test(const CurvatureTest& test, const GeometryConfig& cfg) {
    const std::vector<Vec2> points = curvature_to_points(test, cfg);
    return interpolate_polyline(points, cfg);
}

bool is_valid_test(const CurvatureTest& test, const GeometryConfig& cfg) {
    if (!test.in_range() || test.size() == 0) return false;
    return validate_road(road_from_test(test, cfg), cfg).valid;
}

double validity_rate(const RoadSource& sampler, int n, const GeometryConfig& cfg) {
    if (n < 1) throw ConfigError("validity_rate needs n >= 1");
    int valid = 0;
    for (int i = 0; i < n; ++i) {
        const std::vector<Vec2> points = sampler();
        try {
            if (validate_road(interpolate_polyline(points, cfg), cfg).valid) ++valid;
        } catch (const DegenerateInput&) {
            // Coincident points never make a road.
        }
    }
    return static_cast<double>(valid) / n;
}

} // namespace wogan
