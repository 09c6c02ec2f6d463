#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wogan {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Unit vector pointing along `heading`.
inline Vec2 direction(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Largest admissible magnitude of a single curvature component.
inline constexpr double kMaxCurvature = 0.07;

/// A test in curvature representation: signed curvatures integrated with a
/// fixed step from a fixed start pose.
struct CurvatureTest {
    std::vector<double> kappas;

    std::size_t size() const { return kappas.size(); }
    bool in_range() const;
    bool operator==(const CurvatureTest&) const = default;
};

struct GeometryConfig {
    double map_size = 200.0;
    double step_length = 15.0;
    Vec2 start_point{100.0, 0.0};
    double start_heading = M_PI / 2.0;
    /// Target number of resampled centerline intervals per step_length of arc.
    int samples_per_segment = 15;
    double road_width = 8.0;
    double lane_width = 4.0;
    /// Signed lateral offset of the driving-lane center from the road
    /// centerline, positive to the right of travel. Zero keeps the lane
    /// symmetric about the centerline.
    double lane_offset = 0.0;

    /// Throws ConfigError on violated invariants.
    void validate() const;
    /// Largest heading change allowed between consecutive control segments.
    double sharp_turn_bound() const { return kMaxCurvature * step_length * 1.5; }
};

struct RoadPolyline {
    std::vector<Vec2> control_points;
    std::vector<Vec2> centerline;
    std::vector<Vec2> lane_center;
    std::vector<double> headings;
    double road_width = 8.0;
    double lane_width = 4.0;

    /// Total centerline arc length.
    double length() const;
};

enum class Violation { OutOfMap, SelfIntersection, SharpTurn, TooShort };

std::string to_string(Violation v);

struct ValidityReport {
    bool valid = true;
    std::vector<Violation> violations;

    bool has(Violation v) const;
};

std::vector<Vec2> curvature_to_points(const CurvatureTest& test, const GeometryConfig& cfg);

/// Centripetal Catmull-Rom interpolation through `points`, resampled at
/// near-uniform arc-length spacing of step_length / samples_per_segment.
/// Throws DegenerateInput when fewer than two distinct points are given.
RoadPolyline interpolate_polyline(std::span<const Vec2> points, const GeometryConfig& cfg);

ValidityReport validate_road(const RoadPolyline& road, const GeometryConfig& cfg);

/// Convenience: integrate, interpolate. Throws like interpolate_polyline.
RoadPolyline road_from_test(const CurvatureTest& test, const GeometryConfig& cfg);

/// True iff the road built from `test` validates.
bool is_valid_test(const CurvatureTest& test, const GeometryConfig& cfg);

/// Source of candidate control-point sequences.
using RoadSource = std::function<std::vector<Vec2>()>;

/// Fraction of `n` sampled roads that validate.
double validity_rate(const RoadSource& sampler, int n, const GeometryConfig& cfg);

} // namespace wogan
