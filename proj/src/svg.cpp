#include "wogan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "wogan/errors.hpp"

namespace wogan {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string polyline(std::span<const Vec2> pts, auto&& map, const std::string& style) {
    std::string s = "<polyline fill=\"none\" " + style + " points=\"";
    for (const Vec2& p : pts) {
        const Vec2 q = map(p);
        s += num(q.x) + "," + num(q.y) + " ";
    }
    return s + "\"/>\n";
}

} // namespace

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw EmptyGroup("quantile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) throw EmptyGroup("box plot group is empty");
    std::sort(values.begin(), values.end());
    BoxStats b;
    b.q1 = quantile_sorted(values, 0.25);
    b.median = quantile_sorted(values, 0.5);
    b.q3 = quantile_sorted(values, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.whisker_low = b.q1;
    b.whisker_high = b.q3;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
            continue;
        }
        b.whisker_low = std::min(b.whisker_low, v);
        b.whisker_high = std::max(b.whisker_high, v);
    }
    return b;
}

std::string boxplot_svg(std::span<const LabeledValues> groups, const std::string& title) {
    if (groups.empty()) throw EmptyGroup("box plot needs at least one group");
    std::vector<BoxStats> stats;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [label, values] : groups) {
        if (values.empty()) throw EmptyGroup("box plot group '" + label + "' is empty");
        stats.push_back(box_stats(values));
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double width = 120.0 * static_cast<double>(groups.size()) + 80.0;
    const double height = 360.0;
    const double top = 40.0, bottom = 320.0, left = 60.0;
    auto y = [&](double v) { return bottom - (v - lo) / (hi - lo) * (bottom - top); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) svg << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = lo + (hi - lo) * t / 4.0;
        svg << "<text x=\"" << left - 6 << "\" y=\"" << num(y(v) + 4) << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const BoxStats& b = stats[g];
        const double cx = left + 60.0 + 120.0 * static_cast<double>(g);
        const double half = 30.0;
        svg << "<line class=\"whisker\" x1=\"" << num(cx) << "\" y1=\"" << num(y(b.whisker_low)) << "\" x2=\"" << num(cx)
            << "\" y2=\"" << num(y(b.q1)) << "\" stroke=\"black\"/>\n";
        svg << "<line class=\"whisker\" x1=\"" << num(cx) << "\" y1=\"" << num(y(b.q3)) << "\" x2=\"" << num(cx)
            << "\" y2=\"" << num(y(b.whisker_high)) << "\" stroke=\"black\"/>\n";
        for (double w : {b.whisker_low, b.whisker_high})
            svg << "<line class=\"cap\" x1=\"" << num(cx - half / 2) << "\" y1=\"" << num(y(w)) << "\" x2=\""
                << num(cx + half / 2) << "\" y2=\"" << num(y(w)) << "\" stroke=\"black\"/>\n";
        svg << "<rect class=\"box\" x=\"" << num(cx - half) << "\" y=\"" << num(y(b.q3)) << "\" width=\"" << num(2 * half)
            << "\" height=\"" << num(y(b.q1) - y(b.q3)) << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
        svg << "<line class=\"median\" x1=\"" << num(cx - half) << "\" y1=\"" << num(y(b.median)) << "\" x2=\""
            << num(cx + half) << "\" y2=\"" << num(y(b.median)) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
        for (double o : b.outliers)
            svg << "<circle class=\"outlier\" cx=\"" << num(cx) << "\" cy=\"" << num(y(o)) << "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(cx) << "\" y=\"" << num(bottom + 20) << "\" text-anchor=\"middle\">"
            << escape(groups[g].first) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_boxplot(std::span<const LabeledValues> groups, const std::filesystem::path& out_path, const std::string& title) {
    const std::string svg = boxplot_svg(groups, title);
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot open " + out_path.string() + " for writing");
    out << svg;
    if (!out) throw IoError("write to " + out_path.string() + " failed");
}

std::string road_svg(const RoadPolyline& road, const GeometryConfig& geometry, std::span<const Vec2> trajectory,
                     const std::string& caption) {
    const double scale = 3.0;
    const double size = geometry.map_size * scale;
    auto map = [&](Vec2 p) { return Vec2{p.x * scale, size - p.y * scale}; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size) << "\" height=\"" << num(size + 24)
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"" << num(size) << "\" height=\"" << num(size) << "\" fill=\"#f4f4f4\" stroke=\"black\"/>\n";
    svg << polyline(road.centerline, map,
                    "class=\"road\" stroke=\"#555\" stroke-linejoin=\"round\" stroke-width=\"" + num(road.road_width * scale) + "\"");
    svg << polyline(road.centerline, map, "class=\"centerline\" stroke=\"#ffd700\" stroke-dasharray=\"6 4\" stroke-width=\"1\"");
    for (const Vec2& p : road.control_points) {
        const Vec2 q = map(p);
        svg << "<circle class=\"control\" cx=\"" << num(q.x) << "\" cy=\"" << num(q.y) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }
    if (!trajectory.empty())
        svg << polyline(trajectory, map, "class=\"trajectory\" stroke=\"#d62728\" stroke-width=\"1.5\"");
    if (!caption.empty())
        svg << "<text x=\"4\" y=\"" << num(size + 16) << "\">" << escape(caption) << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace wogan
