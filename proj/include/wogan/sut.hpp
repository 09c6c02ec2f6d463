#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wogan/geometry.hpp"
#include "wogan/polygon.hpp"

namespace wogan {

struct VehicleState {
    Vec2 position;
    double heading = 0.0;
    double steering = 0.0;
    double speed = 0.0;
};

/// Vehicle and controller parameters of the mock lane-keeping system. The
/// defaults come from the calibration sweep (`wogan calibrate`).
struct SimConfig {
    double wheelbase = 2.6;
    double car_length = 4.4;
    double car_width = 1.8;
    double speed = 12.0;
    double lookahead = 11.0;
    double max_steer = 0.16;
    double max_steer_rate = 0.5;
    double dt = 0.05;
    double max_sim_time = 60.0;

    /// Throws ConfigError on violated invariants.
    void validate() const;
};

struct ExecutionResult {
    double fitness = 0.0;
    std::vector<double> bolp_trace;
    std::vector<VehicleState> pose_trace;
    double sim_time = 0.0;
    double wall_time = 0.0;
    bool completed = false;
};

/// Driving-lane geometry prepared for repeated queries: a strip of convex
/// quads around the lane center, extended straight past both road ends so a
/// car sitting on the first or last lane point is fully on the lane.
class LaneGeometry {
public:
    LaneGeometry(const RoadPolyline& road, double end_extension);

    /// Arc length of the lane-center point closest to `p`.
    double closest_arc(Vec2 p) const;
    Vec2 point_at_arc(double s) const;
    double length() const { return arc_.back(); }

    /// Area of `poly` (convex) lying on the lane.
    double area_on_lane(std::span<const Vec2> poly) const;

private:
    struct Quad {
        Polygon corners;
        Vec2 lo, hi;
    };

    std::vector<Vec2> center_;
    std::vector<double> arc_;
    std::vector<Quad> quads_;
};

double bolp(const VehicleState& state, const LaneGeometry& lane, const SimConfig& cfg);
/// Fraction of the car footprint outside the driving lane, in [0, 1].
double bolp(const VehicleState& state, const RoadPolyline& road, const SimConfig& cfg);

/// Pure-pursuit steering toward the lane-center point `lookahead` ahead of
/// the closest lane point, clamped and rate limited. Returns nullopt at end
/// of road (no lookahead point left).
std::optional<double> controller_step(const VehicleState& state, const LaneGeometry& lane, const SimConfig& cfg);
std::optional<double> controller_step(const VehicleState& state, const RoadPolyline& road, const SimConfig& cfg);

/// Kinematic bicycle step with heading-first update.
VehicleState vehicle_step(const VehicleState& state, double steering, const SimConfig& cfg);

/// Runs the closed loop until end of road or max_sim_time. Throws
/// InvalidRoad when the road does not validate under `geometry`.
ExecutionResult simulate(const RoadPolyline& road, const SimConfig& cfg, const GeometryConfig& geometry = {});

/// Writes t, x, y, heading, steering, bolp rows with a header.
void write_trace_csv(std::ostream& out, const ExecutionResult& result, const SimConfig& cfg);

/// Black-box executor: a test in, an execution result out.
using TestExecutor = std::function<ExecutionResult(const CurvatureTest&)>;

/// The mock lane-keeping system under test in curvature representation.
class MockSut {
public:
    MockSut(GeometryConfig geometry, SimConfig sim);

    ExecutionResult execute(const CurvatureTest& test) const;
    TestExecutor executor() const;

    const GeometryConfig& geometry() const { return geometry_; }
    const SimConfig& sim() const { return sim_; }

private:
    GeometryConfig geometry_;
    SimConfig sim_;
};

} // namespace wogan
