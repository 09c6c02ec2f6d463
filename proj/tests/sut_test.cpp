#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wogan/baselines.hpp"
#include "wogan/errors.hpp"
#include "wogan/random.hpp"
#include "wogan/sut.hpp"

using namespace wogan;

namespace {

RoadPolyline straight_road() { return road_from_test(CurvatureTest{std::vector<double>(5, 0.0)}, GeometryConfig{}); }

// Dense arc lane of radius r, counter-clockwise around (cx, cy) from angle 0.
RoadPolyline arc_road(double r, double sweep) {
    RoadPolyline road;
    const int n = static_cast<int>(sweep * r / 0.2);
    for (int i = 0; i <= n; ++i) {
        const double phi = sweep * i / n;
        road.centerline.push_back({100 + r * std::cos(phi), 100 + r * std::sin(phi)});
        road.headings.push_back(phi + M_PI / 2);
    }
    road.lane_center = road.centerline;
    road.control_points = {road.centerline.front(), road.centerline.back()};
    return road;
}

VehicleState at(Vec2 p, double heading, double steering = 0.0) {
    VehicleState s;
    s.position = p;
    s.heading = heading;
    s.steering = steering;
    s.speed = SimConfig{}.speed;
    return s;
}

} // namespace

TEST(Bolp, CenteredCarIsInside) {
    EXPECT_NEAR(bolp(at({100, 30}, M_PI / 2), straight_road(), SimConfig{}), 0.0, 1e-12);
}

TEST(Bolp, FullyOutside) {
    const SimConfig cfg;
    const double dx = 4.0 / 2 + cfg.car_width;
    EXPECT_NEAR(bolp(at({100 + dx, 30}, M_PI / 2), straight_road(), cfg), 1.0, 1e-12);
    EXPECT_NEAR(bolp(at({100 - dx, 30}, M_PI / 2), straight_road(), cfg), 1.0, 1e-12);
}

TEST(Bolp, OnBoundaryIsHalf) {
    EXPECT_NEAR(bolp(at({102, 30}, M_PI / 2), straight_road(), SimConfig{}), 0.5, 1e-9);
    EXPECT_NEAR(bolp(at({98, 30}, M_PI / 2), straight_road(), SimConfig{}), 0.5, 1e-9);
}

TEST(Bolp, MonotoneInLateralOffset) {
    const auto road = straight_road();
    double prev = -1.0;
    for (double dx = 0.0; dx <= 5.0; dx += 0.05) {
        const double b = bolp(at({100 + dx, 30}, M_PI / 2), road, SimConfig{});
        EXPECT_GE(b, prev - 1e-12);
        EXPECT_GE(b, 0.0);
        EXPECT_LE(b, 1.0);
        prev = b;
    }
}

TEST(Controller, StraightAlignedGivesZero) {
    const auto cmd = controller_step(at({100, 10}, M_PI / 2), straight_road(), SimConfig{});
    ASSERT_TRUE(cmd.has_value());
    EXPECT_NEAR(*cmd, 0.0, 1e-12);
}

TEST(Controller, ArcMatchesClosedForm) {
    const SimConfig cfg;
    for (double r : {30.0, 50.0, 80.0}) {
        const auto road = arc_road(r, 1.5);
        const double want = std::atan(cfg.wheelbase / r);
        // Start steering at the expected command so the rate limit is inactive.
        const auto cmd = controller_step(at({100 + r, 100}, M_PI / 2, want), road, cfg);
        ASSERT_TRUE(cmd.has_value());
        EXPECT_NEAR(*cmd, want, 1e-3) << "radius " << r;
    }
}

TEST(Controller, ClampAndRateLimit) {
    SimConfig cfg;
    const auto road = straight_road();
    // Heading far off to the right: the raw command saturates at max_steer
    // and the slew limit holds it to steering + rate * dt.
    const auto cmd = controller_step(at({100, 10}, 0.0, 0.0), road, cfg);
    ASSERT_TRUE(cmd.has_value());
    EXPECT_NEAR(*cmd, cfg.max_steer_rate * cfg.dt, 1e-12);
    const auto saturated = controller_step(at({100, 10}, 0.0, cfg.max_steer), road, cfg);
    EXPECT_NEAR(*saturated, cfg.max_steer, 1e-12);
}

TEST(Controller, EndOfRoad) {
    EXPECT_FALSE(controller_step(at({100, 75}, M_PI / 2), straight_road(), SimConfig{}).has_value());
    EXPECT_FALSE(controller_step(at({100, 90}, M_PI / 2), straight_road(), SimConfig{}).has_value());
}

TEST(VehicleStep, ZeroSteeringAdvancesStraight) {
    const SimConfig cfg;
    const VehicleState s = vehicle_step(at({3, 4}, 0.3), 0.0, cfg);
    EXPECT_NEAR(s.position.x, 3 + cfg.speed * cfg.dt * std::cos(0.3), 1e-12);
    EXPECT_NEAR(s.position.y, 4 + cfg.speed * cfg.dt * std::sin(0.3), 1e-12);
    EXPECT_DOUBLE_EQ(s.heading, 0.3);
}

TEST(VehicleStep, ConstantSteeringTracesCircle) {
    SimConfig cfg;
    const double steer = 0.1;
    const double radius = cfg.wheelbase / std::tan(steer);
    auto max_error = [&](double dt) {
        SimConfig c = cfg;
        c.dt = dt;
        VehicleState s = at({0, 0}, 0.0);
        const Vec2 center{0, radius};
        double worst = 0.0;
        const int steps = static_cast<int>(std::lround(10.0 / dt));
        for (int i = 0; i < steps; ++i) {
            s = vehicle_step(s, steer, c);
            worst = std::max(worst, std::abs(distance(s.position, center) - radius));
        }
        return worst;
    };
    const double coarse = max_error(cfg.dt);
    const double fine = max_error(cfg.dt / 10);
    EXPECT_LT(coarse, 0.5);
    EXPECT_LT(fine, coarse / 5);
}

TEST(SimConfig, RejectsBadValues) {
    SimConfig cfg;
    cfg.dt = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.dt = 0.2;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.lookahead = cfg.wheelbase;
    EXPECT_THROW(cfg.validate(), ConfigError);
    EXPECT_THROW(MockSut(GeometryConfig{}, cfg), ConfigError);
}

TEST(Simulate, StraightRoadBarelyLeavesLane) {
    const ExecutionResult r = simulate(straight_road(), SimConfig{});
    EXPECT_LT(r.fitness, 0.05);
    EXPECT_TRUE(r.completed);
}

TEST(Simulate, SustainedMinimumRadiusTurnFails) {
    GeometryConfig geo;
    geo.start_point = {100, 40};
    const auto road = road_from_test(CurvatureTest{std::vector<double>(5, 0.07)}, geo);
    ASSERT_TRUE(validate_road(road, geo).valid);
    EXPECT_GT(simulate(road, SimConfig{}, geo).fitness, 0.5);
}

TEST(Simulate, InvalidRoadThrows) {
    GeometryConfig geo;
    geo.start_point = {100, 100};
    const auto loop = road_from_test(CurvatureTest{std::vector<double>(7, 0.07)}, geo);
    EXPECT_THROW(simulate(loop, SimConfig{}, geo), InvalidRoad);
}

TEST(Simulate, FitnessIsMaxOfTrace) {
    const MockSut sut(GeometryConfig{}, SimConfig{});
    Rng rng(2);
    int run = 0;
    while (run < 30) {
        const CurvatureTest t = random_walk_test(5, rng);
        if (!is_valid_test(t, sut.geometry())) continue;
        ++run;
        const ExecutionResult r = sut.execute(t);
        EXPECT_EQ(r.fitness, *std::max_element(r.bolp_trace.begin(), r.bolp_trace.end()));
        EXPECT_EQ(r.bolp_trace.size(), r.pose_trace.size());
        for (double b : r.bolp_trace) {
            EXPECT_GE(b, 0.0);
            EXPECT_LE(b, 1.0);
        }
        for (const VehicleState& s : r.pose_trace) EXPECT_LE(std::abs(s.steering), sut.sim().max_steer);
    }
}

TEST(Simulate, Deterministic) {
    const MockSut sut(GeometryConfig{}, SimConfig{});
    const CurvatureTest t{{0.03, -0.05, 0.06, -0.02, 0.01}};
    const ExecutionResult a = sut.execute(t);
    const ExecutionResult b = sut.execute(t);
    EXPECT_EQ(a.bolp_trace, b.bolp_trace);
    EXPECT_EQ(a.fitness, b.fitness);
}

TEST(Simulate, MirrorEquivariance) {
    const MockSut sut(GeometryConfig{}, SimConfig{});
    Rng rng(13);
    int run = 0;
    while (run < 30) {
        const CurvatureTest t = uniform_random_test(5, rng);
        if (!is_valid_test(t, sut.geometry())) continue;
        ++run;
        const ExecutionResult a = sut.execute(t);
        const ExecutionResult b = sut.execute(mutate_mirror(t));
        ASSERT_EQ(a.bolp_trace.size(), b.bolp_trace.size());
        for (std::size_t i = 0; i < a.bolp_trace.size(); ++i) EXPECT_NEAR(a.bolp_trace[i], b.bolp_trace[i], 1e-6);
    }
}

TEST(Simulate, AbortsAtMaxSimTime) {
    SimConfig cfg;
    cfg.max_sim_time = 1.0;
    const ExecutionResult r = simulate(straight_road(), cfg);
    EXPECT_FALSE(r.completed);
    EXPECT_NEAR(r.sim_time, 1.0, 1e-9);
}

TEST(Simulate, TraceCsv) {
    const SimConfig cfg;
    const ExecutionResult r = simulate(straight_road(), cfg);
    std::ostringstream out;
    write_trace_csv(out, r, cfg);
    const std::string csv = out.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,x,y,heading,steering,bolp");
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.pose_trace.size() + 1);
}
