#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wogan/geometry.hpp"
#include "wogan/suite.hpp"

namespace wogan {

/// Number of points a road is reduced to before turning it into angles.
inline constexpr int kDiversityPoints = 75;

struct SuiteStats {
    int executed = 0;
    int failing = 0;
    double mean_fitness_final_80 = 0.0;
    double mean_fitness_final_20 = 0.0;
    double mean_generation_time = 0.0;
    double sd_generation_time = 0.0;
    std::optional<double> diversity;
};

/// 75 evenly indexed centerline points, rotated so the first segment points
/// up, turned into the 74 unwrapped absolute segment directions. Throws
/// TooShort when the centerline has fewer than 75 points.
std::vector<double> normalize_to_angles(const RoadPolyline& road);

/// Median of an unsorted sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

/// Median pairwise Euclidean distance between the angle vectors of failing
/// tests (fitness > threshold); absent with fewer than two failing tests.
std::optional<double> suite_diversity(const TestSuite& suite, double threshold, const GeometryConfig& geometry);

/// Diversity of explicit angle vectors.
std::optional<double> angle_diversity(std::span<const std::vector<double>> vectors);

/// Number of records kept by a "final fraction" window, at least one.
std::size_t tail_count(std::size_t n, double fraction);

/// Throws EmptySuite on an empty suite.
SuiteStats suite_stats(const TestSuite& suite, double threshold, const GeometryConfig& geometry);

/// Per-repetition CSV columns, Table-1 style labels.
std::vector<std::string> stats_csv_header();
std::vector<std::string> stats_csv_cells(const SuiteStats& stats);

} // namespace wogan
