#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "wogan/baselines.hpp"
#include "wogan/errors.hpp"
#include "wogan/metrics.hpp"

using namespace wogan;

namespace {

TestRecord record(CurvatureTest t, double fitness) {
    TestRecord r;
    r.test = std::move(t);
    r.fitness = fitness;
    return r;
}

TestSuite with_fitness(std::vector<double> f) {
    TestSuite s;
    for (double v : f) s.records.push_back(record(CurvatureTest{{0.0, 0.0, 0.0, 0.0, 0.0}}, v));
    return s;
}

RoadPolyline transformed(const RoadPolyline& road, double angle, Vec2 shift) {
    RoadPolyline out = road;
    const double c = std::cos(angle), s = std::sin(angle);
    for (Vec2& p : out.centerline) p = Vec2{c * p.x - s * p.y, s * p.x + c * p.y} + shift;
    return out;
}

// Suite of valid random-walk tests, every one failing.
TestSuite failing_suite(int n, Rng& rng) {
    TestSuite s;
    while (static_cast<int>(s.size()) < n) {
        CurvatureTest t = random_walk_test(5, rng);
        if (is_valid_test(t, GeometryConfig{})) s.records.push_back(record(std::move(t), 1.0));
    }
    return s;
}

} // namespace

TEST(NormalizeToAngles, StraightRoadPointsUp) {
    const RoadPolyline road = road_from_test(CurvatureTest{std::vector<double>(5, 0.0)}, GeometryConfig{});
    const auto angles = normalize_to_angles(road);
    ASSERT_EQ(angles.size(), 74u);
    for (double a : angles) EXPECT_NEAR(a, M_PI / 2, 1e-12);
}

TEST(NormalizeToAngles, RigidMotionInvariant) {
    Rng rng(1);
    for (int n = 0; n < 50; ++n) {
        const RoadPolyline road = road_from_test(uniform_random_test(5, rng), GeometryConfig{});
        const auto a = normalize_to_angles(road);
        const auto b = normalize_to_angles(transformed(road, uniform(rng, -M_PI, M_PI), {uniform(rng, -50, 50), 3.0}));
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
    }
}

TEST(NormalizeToAngles, ArcIsArithmetic) {
    // 149 points on a circle: the reduction keeps every other point, so the
    // chord directions advance by exactly twice the per-point angle.
    RoadPolyline road;
    const double r = 30.0, dphi = 0.02;
    for (int i = 0; i < 149; ++i)
        road.centerline.push_back({50 + r * std::cos(dphi * i), 70 + r * std::sin(dphi * i)});
    const auto angles = normalize_to_angles(road);
    EXPECT_NEAR(angles[0], M_PI / 2, 1e-12);
    for (std::size_t i = 1; i < angles.size(); ++i) EXPECT_NEAR(angles[i] - angles[i - 1], 2 * dphi, 1e-12);
}

TEST(NormalizeToAngles, SplineArcTurnsSteadily) {
    GeometryConfig geo;
    geo.start_point = {100, 100};
    const RoadPolyline road = road_from_test(CurvatureTest{std::vector<double>(5, 0.04)}, geo);
    const auto angles = normalize_to_angles(road);
    for (std::size_t i = 1; i < angles.size(); ++i) {
        EXPECT_GT(angles[i] - angles[i - 1], 0.0);
        EXPECT_LT(angles[i] - angles[i - 1], 0.1);
    }
    // Total turn of the 75-unit arc, less the half chords at either end.
    EXPECT_NEAR(angles.back() - angles.front(), 0.04 * road.length(), 0.15);
}

TEST(NormalizeToAngles, UnwrapsAcrossPi) {
    // Tight left turn: directions pass through pi without jumping to -pi.
    GeometryConfig geo;
    geo.start_point = {100, 100};
    const RoadPolyline road = road_from_test(CurvatureTest{std::vector<double>(5, 0.07)}, geo);
    const auto angles = normalize_to_angles(road);
    for (std::size_t i = 1; i < angles.size(); ++i) EXPECT_LT(std::abs(angles[i] - angles[i - 1]), 0.5);
    EXPECT_GT(angles.back(), M_PI);
}

TEST(NormalizeToAngles, TooShort) {
    RoadPolyline road;
    for (int i = 0; i < 74; ++i) road.centerline.push_back({0.0, static_cast<double>(i)});
    EXPECT_THROW(normalize_to_angles(road), TooShort);
}

TEST(Median, OddAndEven) {
    EXPECT_DOUBLE_EQ(median({4, 1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(median({4, 1, 2, 3}), 2.5);
    EXPECT_DOUBLE_EQ(median({7}), 7.0);
}

TEST(AngleDiversity, MedianOfPairwiseDistances) {
    // Pairwise distances 1, 3 and 2.
    const std::vector<std::vector<double>> v{{0.0}, {1.0}, {3.0}};
    EXPECT_DOUBLE_EQ(*angle_diversity(v), 2.0);
    const std::vector<std::vector<double>> one{{0.0}};
    EXPECT_FALSE(angle_diversity(one).has_value());
}

TEST(SuiteDiversity, IdenticalAndSingle) {
    const CurvatureTest t{{0.01, -0.02, 0.03, 0.0, 0.01}};
    TestSuite s;
    s.records = {record(t, 0.99), record(t, 0.97)};
    EXPECT_DOUBLE_EQ(*suite_diversity(s, 0.95, GeometryConfig{}), 0.0);
    s.records[1].fitness = 0.5;
    EXPECT_FALSE(suite_diversity(s, 0.95, GeometryConfig{}).has_value());
}

TEST(SuiteDiversity, OrderIndependent) {
    Rng rng(2);
    TestSuite s = failing_suite(12, rng);
    const double a = *suite_diversity(s, 0.95, GeometryConfig{});
    std::shuffle(s.records.begin(), s.records.end(), rng);
    EXPECT_DOUBLE_EQ(*suite_diversity(s, 0.95, GeometryConfig{}), a);
}

TEST(SuiteDiversity, MirroredSuiteKeepsDiversity) {
    Rng rng(3);
    for (int n = 0; n < 20; ++n) {
        TestSuite s = failing_suite(2 + static_cast<int>(pick(rng, 10)), rng);
        const double before = *suite_diversity(s, 0.95, GeometryConfig{});
        for (TestRecord& r : s.records) r.test = mutate_mirror(r.test);
        EXPECT_NEAR(*suite_diversity(s, 0.95, GeometryConfig{}), before, 1e-9);
    }
}

// Adding each road's mirror adds cross pairs that may sit below the old
// median, so mirror-closing a suite can lower its diversity.
TEST(SuiteDiversity, MirrorClosingCanLowerDiversity) {
    TestSuite s;
    s.records = {record(CurvatureTest{{0.01, 0.0, 0.0, 0.0, 0.0}}, 1.0),
                 record(CurvatureTest{{0.05, 0.05, 0.05, 0.0, 0.0}}, 1.0)};
    const double before = *suite_diversity(s, 0.95, GeometryConfig{});
    for (std::size_t i = 0; i < 2; ++i) s.records.push_back(record(mutate_mirror(s.records[i].test), 1.0));
    EXPECT_LT(*suite_diversity(s, 0.95, GeometryConfig{}), before);
}

TEST(TailCount, Windows) {
    EXPECT_EQ(tail_count(10, 0.2), 2u);
    EXPECT_EQ(tail_count(10, 0.8), 8u);
    EXPECT_EQ(tail_count(3, 0.2), 1u);
    EXPECT_EQ(tail_count(1, 0.8), 1u);
}

TEST(SuiteStats, FailingCount) {
    const SuiteStats s = suite_stats(with_fitness({0.1, 0.96, 1.0}), 0.95, GeometryConfig{});
    EXPECT_EQ(s.executed, 3);
    EXPECT_EQ(s.failing, 2);
}

TEST(SuiteStats, TailMeans) {
    const SuiteStats s = suite_stats(with_fitness({0, 0, 0, 0, 0, 0, 0, 0, 0.4, 0.6}), 0.95, GeometryConfig{});
    EXPECT_DOUBLE_EQ(s.mean_fitness_final_20, 0.5);
    EXPECT_DOUBLE_EQ(s.mean_fitness_final_80, 1.0 / 8);
    const SuiteStats flat = suite_stats(with_fitness(std::vector<double>(7, 0.5)), 0.95, GeometryConfig{});
    EXPECT_DOUBLE_EQ(flat.mean_fitness_final_20, 0.5);
    EXPECT_DOUBLE_EQ(flat.mean_fitness_final_80, 0.5);
}

TEST(SuiteStats, GenerationTime) {
    TestSuite s = with_fitness({0.1, 0.2, 0.3});
    s.records[0].generation_time = 1.0;
    s.records[1].generation_time = 2.0;
    s.records[2].generation_time = 3.0;
    const SuiteStats st = suite_stats(s, 0.95, GeometryConfig{});
    EXPECT_DOUBLE_EQ(st.mean_generation_time, 2.0);
    EXPECT_DOUBLE_EQ(st.sd_generation_time, 1.0);
}

TEST(SuiteStats, FailingNonIncreasingInThreshold) {
    Rng rng(4);
    std::vector<double> f;
    for (int i = 0; i < 200; ++i) f.push_back(uniform(rng, 0, 1));
    const TestSuite s = with_fitness(f);
    int previous = 201;
    for (double b = 0.0; b <= 1.0; b += 0.05) {
        const int now = suite_stats(s, b, GeometryConfig{}).failing;
        EXPECT_LE(now, previous);
        previous = now;
    }
}

TEST(SuiteStats, EmptySuite) { EXPECT_THROW(suite_stats(TestSuite{}, 0.95, GeometryConfig{}), EmptySuite); }

TEST(StatsCsv, HeaderMatchesCells) {
    const SuiteStats s = suite_stats(with_fitness({0.1, 0.96}), 0.95, GeometryConfig{});
    EXPECT_EQ(stats_csv_header().size(), stats_csv_cells(s).size());
}
