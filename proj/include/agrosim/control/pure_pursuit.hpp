#pragma once

#include "agrosim/planner/route.hpp"

namespace agrosim::control {

using planner::Point2;

struct PurePursuitConfig {
    double lookahead = 1.0;      ///< m, L_d
    double cruise_speed = 1.0;   ///< m/s
    double goal_tolerance = 0.05; ///< m of remaining route counted as arrived

    void validate() const;
};

/// Curvature of the arc through the origin, tangent to the x axis, that chases
/// `target` given in the vehicle frame: 2*y/L_d^2. A target behind the vehicle
/// gets the tightest arc 2/L_d toward its side (left when exactly behind).
double pursuit_curvature(Point2 target, double lookahead);

/// Target point expressed in the frame of a vehicle at `pos` with heading `theta`.
Point2 to_vehicle_frame(Point2 target, Point2 pos, double theta);

/// Track speeds realizing curvature `kappa` at centre speed `v` on track width `w`.
struct TrackSpeeds {
    double left = 0.0;
    double right = 0.0;
};
TrackSpeeds track_speeds(double kappa, double v, double track_width);

struct PursuitOutput {
    double speed = 0.0;     ///< centre speed command, m/s
    double curvature = 0.0; ///< 1/m, positive turns left
    double progress = 0.0;  ///< m along the route
    Point2 target;
    bool finished = false;
};

/// Stateful pure-pursuit tracker over a route.
///
/// Progress is the projection of the vehicle onto the route, searched only a
/// short distance ahead of the previous progress so it never jumps back onto
/// an earlier, nearby swath. Speed tapers linearly over the final L_d.
class PurePursuit {
public:
    PurePursuit(planner::Route route, PurePursuitConfig cfg);

    /// Throws RouteExhausted once the route has been completed.
    PursuitOutput step(Point2 pos, double theta);

    bool finished() const { return finished_; }
    double progress() const { return progress_; }
    const planner::Route& route() const { return route_; }
    const PurePursuitConfig& config() const { return cfg_; }

private:
    planner::Route route_;
    PurePursuitConfig cfg_;
    double progress_ = 0.0;
    bool finished_ = false;
};

} // namespace agrosim::control
