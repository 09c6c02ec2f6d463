#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wogan/geometry.hpp"

namespace wogan {

/// Five-number summary with Tukey whiskers.
struct BoxStats {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    /// Most extreme data points within 1.5 IQR of the box.
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

/// Linear-interpolation quantile of a sorted sample, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Throws EmptyGroup on an empty sample.
BoxStats box_stats(std::vector<double> values);

using LabeledValues = std::pair<std::string, std::vector<double>>;

/// One box per group, standalone SVG text. Throws EmptyGroup.
std::string boxplot_svg(std::span<const LabeledValues> groups, const std::string& title);
void emit_boxplot(std::span<const LabeledValues> groups, const std::filesystem::path& out_path,
                  const std::string& title = "");

/// Map-framed rendering of a road (road footprint, centerline, control
/// points) and an optional driven trajectory.
std::string road_svg(const RoadPolyline& road, const GeometryConfig& geometry, std::span<const Vec2> trajectory = {},
                     const std::string& caption = "");

} // namespace wogan
