#include "wogan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wogan/errors.hpp"

namespace wogan {

namespace {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::vector<double> normalize_to_angles(const RoadPolyline& road) {
    const auto& c = road.centerline;
    if (c.size() < static_cast<std::size_t>(kDiversityPoints))
        throw TooShort("diversity needs at least 75 centerline points, got " + std::to_string(c.size()));

    const std::size_t n = c.size();
    std::vector<Vec2> reduced(kDiversityPoints);
    for (int k = 0; k < kDiversityPoints; ++k) {
        const std::size_t idx = static_cast<std::size_t>(
            std::llround(static_cast<double>(k) * static_cast<double>(n - 1) / (kDiversityPoints - 1)));
        reduced[k] = c[idx];
    }

    const Vec2 origin = reduced[0];
    const Vec2 first = reduced[1] - origin;
    const double turn = M_PI / 2.0 - std::atan2(first.y, first.x);
    const double cs = std::cos(turn);
    const double sn = std::sin(turn);
    for (Vec2& p : reduced) {
        const Vec2 q = p - origin;
        p = {cs * q.x - sn * q.y, sn * q.x + cs * q.y};
    }

    std::vector<double> angles(kDiversityPoints - 1);
    double prev = 0.0;
    for (int k = 0; k + 1 < kDiversityPoints; ++k) {
        const Vec2 d = reduced[k + 1] - reduced[k];
        const double raw = std::atan2(d.y, d.x);
        angles[k] = k == 0 ? raw : prev + wrap_angle(raw - prev);
        prev = angles[k];
    }
    return angles;
}

double median(std::vector<double> values) {
    if (values.empty()) throw EmptyData("median of an empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
    return 0.5 * (lower + upper);
}

std::optional<double> angle_diversity(std::span<const std::vector<double>> vectors) {
    if (vectors.size() < 2) return std::nullopt;
    std::vector<double> distances;
    distances.reserve(vectors.size() * (vectors.size() - 1) / 2);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            double sq = 0.0;
            for (std::size_t k = 0; k < vectors[i].size(); ++k) {
                const double d = vectors[i][k] - vectors[j][k];
                sq += d * d;
            }
            distances.push_back(std::sqrt(sq));
        }
    }
    return median(std::move(distances));
}

std::optional<double> suite_diversity(const TestSuite& suite, double threshold, const GeometryConfig& geometry) {
    std::vector<std::vector<double>> vectors;
    for (const TestRecord& r : suite.records) {
        if (r.fitness > threshold) vectors.push_back(normalize_to_angles(road_from_test(r.test, geometry)));
    }
    return angle_diversity(vectors);
}

std::size_t tail_count(std::size_t n, double fraction) {
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n);
}

SuiteStats suite_stats(const TestSuite& suite, double threshold, const GeometryConfig& geometry) {
    if (suite.empty()) throw EmptySuite("statistics need at least one record");
    const auto& recs = suite.records;
    const std::size_t n = recs.size();

    SuiteStats s;
    s.executed = static_cast<int>(n);
    s.failing = static_cast<int>(std::count_if(recs.begin(), recs.end(), [&](const TestRecord& r) { return r.fitness > threshold; }));

    auto tail_mean = [&](double fraction) {
        const std::size_t k = tail_count(n, fraction);
        double sum = 0.0;
        for (std::size_t i = n - k; i < n; ++i) sum += recs[i].fitness;
        return sum / static_cast<double>(k);
    };
    s.mean_fitness_final_80 = tail_mean(0.8);
    s.mean_fitness_final_20 = tail_mean(0.2);

    double sum = 0.0;
    for (const TestRecord& r : recs) sum += r.generation_time;
    s.mean_generation_time = sum / static_cast<double>(n);
    if (n > 1) {
        double sq = 0.0;
        for (const TestRecord& r : recs) sq += (r.generation_time - s.mean_generation_time) * (r.generation_time - s.mean_generation_time);
        s.sd_generation_time = std::sqrt(sq / static_cast<double>(n - 1));
    }
    s.diversity = suite_diversity(suite, threshold, geometry);
    return s;
}

std::vector<std::string> stats_csv_header() {
    return {"executed tests",       "failing tests",      "fitness final 80%", "fitness final 20%",
            "mean generation time", "sd generation time", "diversity"};
}

std::vector<std::string> stats_csv_cells(const SuiteStats& s) {
    return {std::to_string(s.executed),
            std::to_string(s.failing),
            format_number(s.mean_fitness_final_80),
            format_number(s.mean_fitness_final_20),
            format_number(s.mean_generation_time),
            format_number(s.sd_generation_time),
            s.diversity ? format_number(*s.diversity) : std::string()};
}

} // namespace wogan
