#pragma once

#include "agrosim/control/pure_pursuit.hpp"
#include "agrosim/control/speed_controller.hpp"
#include "agrosim/cosim/engine.hpp"
#include "agrosim/plant/vehicle_plant.hpp"

#include <optional>
#include <vector>

namespace agrosim::control {

/// Piecewise-constant setpoint schedule: each entry holds from its time until the next one.
struct SpeedStep {
    double t = 0.0;
    double v = 0.0;
};

class SpeedProfile {
public:
    SpeedProfile() : steps_{{0.0, 1.0}} {}
    /// Throws ValidationError("mission.speed_profile", ...) for empty or non-increasing times.
    explicit SpeedProfile(std::vector<SpeedStep> steps);

    /// Setpoint at time t; zero before the first entry.
    double at(double t) const;
    const std::vector<SpeedStep>& steps() const { return steps_; }

private:
    std::vector<SpeedStep> steps_;
};

/// Maps cumulative encoder ticks to the disturbance phase in [0, 1).
struct EncoderPhase {
    double ticks_per_meter = 1000.0;
    double wavelength = 0.7;

    double operator()(double ticks) const;
};

/// Names of the controller-side reference signals.
namespace ref {
inline constexpr const char* sp_left = "sp_left";
inline constexpr const char* sp_right = "sp_right";
inline constexpr const char* sp = "sp";
inline constexpr const char* progress = "progress";
} // namespace ref

/// The per-track speed loops of one vehicle: two for differential drive, one otherwise.
class SpeedLoops {
public:
    SpeedLoops(plant::VehicleKind kind, const SpeedControllerConfig& cfg, EncoderPhase phase, double dt);

    bool differential() const { return differential_; }
    /// `speeds` and `ticks` hold one entry per loop; returns commands in the same order.
    std::vector<double> step(std::span<const double> setpoints, std::span<const double> speeds,
                             std::span<const double> ticks);
    const SpeedController& loop(std::size_t i) const { return loops_.at(i); }
    std::size_t size() const { return loops_.size(); }

private:
    bool differential_;
    EncoderPhase phase_;
    std::vector<SpeedController> loops_;
};

/// Drives straight ahead following a speed profile (the speed-loop case study).
///
/// Differential drive: consumes enc_speed_left/right and enc_ticks_left/right,
/// produces u_left, u_right, sp_left, sp_right. Steered: consumes enc_speed and
/// enc_ticks, produces u_speed, u_steer (always 0), sp.
class SpeedProfileController final : public cosim::DiscreteModel {
public:
    SpeedProfileController(plant::VehicleKind kind, const SpeedControllerConfig& cfg, SpeedProfile profile,
                           EncoderPhase phase, double dt);

    cosim::PortSet ports() const override;
    void initial_outputs(std::span<double> outputs) const override;
    void step(double t, std::span<const double> inputs, double dt, std::span<double> outputs) override;

    const SpeedLoops& loops() const { return loops_; }

private:
    plant::VehicleKind kind_;
    SpeedProfile profile_;
    SpeedLoops loops_;
};

/// Follows a waypoint route with pure pursuit on top of the speed loops.
///
/// Additionally consumes pose_x, pose_y, pose_theta and produces the route
/// progress. Differential drive splits the pursuit curvature into track speed
/// setpoints; steered vehicles steer to atan(kappa * wheelbase).
class RouteController final : public cosim::DiscreteModel {
public:
    /// `geometry` is the track width (differential drive) or the wheelbase.
    RouteController(plant::VehicleKind kind, const SpeedControllerConfig& cfg, PurePursuitConfig pursuit,
                    planner::Route route, double geometry, EncoderPhase phase, double dt);

    cosim::PortSet ports() const override;
    void initial_outputs(std::span<double> outputs) const override;
    void step(double t, std::span<const double> inputs, double dt, std::span<double> outputs) override;
    bool mission_complete() const override { return pursuit_.finished(); }

    /// Replaces the route; progress restarts at its beginning, learned speed-loop state is kept.
    void set_route(planner::Route route);
    const PurePursuit& pursuit() const { return pursuit_; }
    const SpeedLoops& loops() const { return loops_; }

private:
    plant::VehicleKind kind_;
    PurePursuitConfig pursuit_cfg_;
    PurePursuit pursuit_;
    double geometry_;
    SpeedLoops loops_;
};

} // namespace agrosim::control
