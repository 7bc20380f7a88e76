#include "agrosim/control/pure_pursuit.hpp"

#include "agrosim/error.hpp"

#include <algorithm>
#include <cmath>

namespace agrosim::control {

void PurePursuitConfig::validate() const {
    if (!(lookahead > 0.0) || !std::isfinite(lookahead)) throw ValidationError("controller.lookahead", "must be > 0");
    if (!(cruise_speed > 0.0) || !std::isfinite(cruise_speed)) {
        throw ValidationError("controller.cruise_speed", "must be > 0");
    }
    if (!(goal_tolerance >= 0.0) || !std::isfinite(goal_tolerance)) {
        throw ValidationError("controller.goal_tolerance", "must be >= 0");
    }
}

double pursuit_curvature(Point2 target, double lookahead) {
    if (target.x < 0.0) return (target.y < 0.0 ? -2.0 : 2.0) / lookahead;
    return 2.0 * target.y / (lookahead * lookahead);
}

Point2 to_vehicle_frame(Point2 target, Point2 pos, double theta) {
    return planner::rotate(target - pos, -theta);
}

TrackSpeeds track_speeds(double kappa, double v, double track_width) {
    return {v * (1.0 - 0.5 * kappa * track_width), v * (1.0 + 0.5 * kappa * track_width)};
}

PurePursuit::PurePursuit(planner::Route route, PurePursuitConfig cfg) : route_(std::move(route)), cfg_(cfg) {
    cfg_.validate();
    if (route_.empty()) throw std::invalid_argument("pure pursuit needs a non-empty route");
}

PursuitOutput PurePursuit::step(Point2 pos, double theta) {
    if (finished_) throw RouteExhausted();
    const double ld = cfg_.lookahead;
    const double length = route_.length();
    progress_ = route_.project(pos, progress_, progress_ + 2.0 * ld);

    const double remaining = length - progress_;
    const Point2 end = route_.point_at(length);
    const bool passed_end = remaining < ld && dot(pos - end, route_.tangent_at(length)) >= 0.0;
    PursuitOutput out;
    out.progress = progress_;
    if (remaining <= cfg_.goal_tolerance || passed_end) {
        finished_ = true;
        out.target = end;
        out.finished = true;
        return out;
    }

    out.target = planner::lookahead_point(route_, progress_, ld);
    out.curvature = pursuit_curvature(to_vehicle_frame(out.target, pos, theta), ld);
    out.speed = cfg_.cruise_speed * (remaining < ld ? std::max(remaining / ld, 0.2) : 1.0);
    return out;
}

} // namespace agrosim::control
