#include "wogan/sut.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <cmath>
#include <ostream>

#include "wogan/errors.hpp"

namespace wogan {

void SimConfig::validate() const {
    if (!(wheelbase > 0 && car_length > 0 && car_width > 0 && speed > 0 && lookahead > 0 && max_steer > 0 &&
          max_steer_rate > 0 && dt > 0 && max_sim_time > 0))
        throw ConfigError("sim: all parameters must be positive");
    if (dt > 0.1) throw ConfigError("sim.dt must be <= 0.1");
    if (lookahead <= wheelbase) throw ConfigError("sim.lookahead must exceed sim.wheelbase");
}

LaneGeometry::LaneGeometry(const RoadPolyline& road, double end_extension) {
    const auto& lc = road.lane_center;
    if (lc.size() < 2) throw DegenerateInput("lane needs at least two points");

    // Extend the lane straight along the end tangents.
    const Vec2 head = direction(road.headings.front());
    const Vec2 tail = direction(road.headings.back());
    std::vector<Vec2> pts;
    std::vector<double> hdg;
    pts.reserve(lc.size() + 2);
    pts.push_back(lc.front() - head * end_extension);
    hdg.push_back(road.headings.front());
    pts.insert(pts.end(), lc.begin(), lc.end());
    hdg.insert(hdg.end(), road.headings.begin(), road.headings.end());
    pts.push_back(lc.back() + tail * end_extension);
    hdg.push_back(road.headings.back());

    const double half = road.lane_width / 2.0;
    std::vector<Vec2> left(pts.size()), right(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2 n{-std::sin(hdg[i]), std::cos(hdg[i])};
        left[i] = pts[i] + n * half;
        right[i] = pts[i] - n * half;
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Quad q;
        q.corners = {right[i], right[i + 1], left[i + 1], left[i]};
        q.lo = q.hi = q.corners[0];
        for (const Vec2& c : q.corners) {
            q.lo = {std::min(q.lo.x, c.x), std::min(q.lo.y, c.y)};
            q.hi = {std::max(q.hi.x, c.x), std::max(q.hi.y, c.y)};
        }
        quads_.push_back(std::move(q));
    }

    // Arc-length queries run on the unextended lane center.
    center_ = lc;
    arc_.assign(lc.size(), 0.0);
    for (std::size_t i = 1; i < lc.size(); ++i) arc_[i] = arc_[i - 1] + distance(lc[i - 1], lc[i]);
}

double LaneGeometry::closest_arc(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    double best_arc = 0.0;
    for (std::size_t i = 0; i + 1 < center_.size(); ++i) {
        const Vec2 a = center_[i];
        const Vec2 ab = center_[i + 1] - a;
        const double len2 = ab.dot(ab);
        const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
        const double d = distance(p, a + ab * t);
        if (d < best) {
            best = d;
            best_arc = arc_[i] + t * (arc_[i + 1] - arc_[i]);
        }
    }
    return best_arc;
}

Vec2 LaneGeometry::point_at_arc(double s) const {
    if (s <= 0.0) return center_.front();
    if (s >= arc_.back()) return center_.back();
    const auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - arc_.begin()) - 1;
    const double w = (s - arc_[i]) / (arc_[i + 1] - arc_[i]);
    return center_[i] + (center_[i + 1] - center_[i]) * w;
}

double LaneGeometry::area_on_lane(std::span<const Vec2> poly) const {
    Vec2 lo = poly[0], hi = poly[0];
    for (const Vec2& p : poly) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    double total = 0.0;
    for (const Quad& q : quads_) {
        if (q.hi.x < lo.x || q.lo.x > hi.x || q.hi.y < lo.y || q.lo.y > hi.y) continue;
        total += intersection_area(poly, q.corners);
    }
    return total;
}

double bolp(const VehicleState& state, const LaneGeometry& lane, const SimConfig& cfg) {
    const Polygon car = oriented_rectangle(state.position, state.heading, cfg.car_length, cfg.car_width);
    const double car_area = cfg.car_length * cfg.car_width;
    const double inside = lane.area_on_lane(car);
    return std::clamp(1.0 - inside / car_area, 0.0, 1.0);
}

double bolp(const VehicleState& state, const RoadPolyline& road, const SimConfig& cfg) {
    return bolp(state, LaneGeometry(road, cfg.car_length), cfg);
}

std::optional<double> controller_step(const VehicleState& state, const LaneGeometry& lane, const SimConfig& cfg) {
    const double s = lane.closest_arc(state.position) + cfg.lookahead;
    if (s > lane.length()) return std::nullopt;

    const Vec2 to_target = lane.point_at_arc(s) - state.position;
    const double ld = to_target.norm();
    double command = 0.0;
    if (ld > 1e-12) {
        const double alpha = wrap_angle(std::atan2(to_target.y, to_target.x) - state.heading);
        command = std::atan(2.0 * cfg.wheelbase * std::sin(alpha) / ld);
    }
    command = std::clamp(command, -cfg.max_steer, cfg.max_steer);
    const double slew = cfg.max_steer_rate * cfg.dt;
    return std::clamp(command, state.steering - slew, state.steering + slew);
}

std::optional<double> controller_step(const VehicleState& state, const RoadPolyline& road, const SimConfig& cfg) {
    return controller_step(state, LaneGeometry(road, cfg.car_length), cfg);
}

VehicleState vehicle_step(const VehicleState& state, double steering, const SimConfig& cfg) {
    steering = std::clamp(steering, -cfg.max_steer, cfg.max_steer);
    VehicleState next = state;
    next.heading = state.heading + (state.speed / cfg.wheelbase) * std::tan(steering) * cfg.dt;
    next.position = state.position + direction(next.heading) * (state.speed * cfg.dt);
    next.steering = steering;
    return next;
}

ExecutionResult simulate(const RoadPolyline& road, const SimConfig& cfg, const GeometryConfig& geometry) {
    cfg.validate();
    const ValidityReport report = validate_road(road, geometry);
    if (!report.valid) {
        std::string why;
        for (Violation v : report.violations) why += (why.empty() ? "" : ", ") + to_string(v);
        throw InvalidRoad("road does not validate: " + why);
    }

    const auto started = std::chrono::steady_clock::now();
    const LaneGeometry lane(road, cfg.car_length);

    VehicleState state;
    state.position = road.lane_center.front();
    const Vec2 first = road.lane_center[1] - road.lane_center[0];
    state.heading = std::atan2(first.y, first.x);
    state.steering = 0.0;
    state.speed = cfg.speed;

    ExecutionResult result;
    result.pose_trace.push_back(state);
    result.bolp_trace.push_back(bolp(state, lane, cfg));

    const auto max_steps = static_cast<long>(std::llround(cfg.max_sim_time / cfg.dt));
    long step = 0;
    for (; step < max_steps; ++step) {
        const std::optional<double> command = controller_step(state, lane, cfg);
        if (!command) {
            result.completed = true;
            break;
        }
        state = vehicle_step(state, *command, cfg);
        result.pose_trace.push_back(state);
        result.bolp_trace.push_back(bolp(state, lane, cfg));
    }

    result.sim_time = static_cast<double>(step) * cfg.dt;
    result.fitness = *std::max_element(result.bolp_trace.begin(), result.bolp_trace.end());
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

void write_trace_csv(std::ostream& out, const ExecutionResult& result, const SimConfig& cfg) {
    out << "t,x,y,heading,steering,bolp\n";
    char line[256];
    for (std::size_t i = 0; i < result.pose_trace.size(); ++i) {
        const VehicleState& s = result.pose_trace[i];
        std::snprintf(line, sizeof line, "%.4f,%.6f,%.6f,%.6f,%.6f,%.6f\n", static_cast<double>(i) * cfg.dt,
                      s.position.x, s.position.y, s.heading, s.steering, result.bolp_trace[i]);
        out << line;
    }
}

MockSut::MockSut(GeometryConfig geometry, SimConfig sim) : geometry_(geometry), sim_(sim) {
    geometry_.validate();
    sim_.validate();
}

ExecutionResult MockSut::execute(const CurvatureTest& test) const {
    return simulate(road_from_test(test, geometry_), sim_, geometry_);
}

TestExecutor MockSut::executor() const {
    return [sut = *this](const CurvatureTest& test) { return sut.execute(test); };
}

} // namespace wogan
