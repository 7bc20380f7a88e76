#pragma once

#include <cmath>
#include <concepts>

namespace agrosim::plant {

struct DiffDriveParams {
    double track_width = 1.0;   ///< m, distance between track centerlines
    double actuator_tau = 0.25; ///< s, first-order track speed lag (0 = pass-through)
    double v_max = 2.0;         ///< m/s, track speed saturation

    void validate() const;
};

enum class SteeredAxle { Front, Rear };

struct SteeredParams {
    double wheelbase = 1.5;
    double steer_limit = 0.6;      ///< rad, 0 < limit < pi/2
    double steer_rate_limit = 1.0; ///< rad/s
    double steer_tau = 0.05;       ///< s, steering servo time constant below the rate limit (0 = rate limiter only)
    SteeredAxle steered_axle = SteeredAxle::Front;
    double actuator_tau = 0.25;
    double v_max = 2.0;

    void validate() const;
};

/// Plant state shared by all vehicle templates.
///
/// Differential drive uses v_left/v_right and odo_left/odo_right; the steered
/// templates use v, delta and odo. Unused fields stay zero. `s` is the
/// cumulative unsigned distance of the vehicle reference point; the odometer
/// fields are signed travel of the driven element and feed the encoders.
struct VehicleState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double v_left = 0.0;
    double v_right = 0.0;
    double v = 0.0;
    double delta = 0.0;
    double s = 0.0;
    double odo_left = 0.0;
    double odo_right = 0.0;
    double odo = 0.0;

    bool finite() const;

    VehicleState& operator+=(const VehicleState& o);
    VehicleState& operator*=(double k);
    friend VehicleState operator+(VehicleState a, const VehicleState& b) { return a += b; }
    friend VehicleState operator*(VehicleState a, double k) { return a *= k; }
    friend VehicleState operator*(double k, VehicleState a) { return a *= k; }
    friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

/// Track speed commands, m/s.
struct DiffDriveCommand {
    double left = 0.0;
    double right = 0.0;
};

/// Speed command (m/s) and steering angle command (rad).
struct SteeredCommand {
    double speed = 0.0;
    double steer = 0.0;
};

inline double saturate(double u, double limit) {
    return u > limit ? limit : (u < -limit ? -limit : u);
}

/// Unicycle kinematics with first-order track lag.
VehicleState diff_drive_derivative(const VehicleState& state, const DiffDriveCommand& cmd, const DiffDriveParams& p);

/// Kinematic bicycle with first-order speed lag and a rate-limited steering servo.
VehicleState steered_derivative(const VehicleState& state, const SteeredCommand& cmd, const SteeredParams& p);

/// Differential-drive template. `settle` applies the algebraic parts of the
/// model (pass-through actuators, saturation) after an integration step.
struct DiffDriveModel {
    using Command = DiffDriveCommand;
    DiffDriveParams params;

    VehicleState derivative(const VehicleState& s, const Command& c) const { return diff_drive_derivative(s, c, params); }
    void settle(VehicleState& s, const Command& c, double h) const;
};

struct SteeredModel {
    using Command = SteeredCommand;
    SteeredParams params;

    VehicleState derivative(const VehicleState& s, const Command& c) const { return steered_derivative(s, c, params); }
    void settle(VehicleState& s, const Command& c, double h) const;
};

template <typename Model>
concept VehicleModel = requires(const Model m, VehicleState s, const typename Model::Command c, double h) {
    { m.derivative(s, c) } -> std::same_as<VehicleState>;
    m.settle(s, c, h);
};

/// Classic 4th-order Runge-Kutta step with the command held across the four stages.
/// Throws NonFiniteState when the result is not finite.
template <VehicleModel Model>
VehicleState rk4_step(const Model& model, const VehicleState& state, const typename Model::Command& cmd, double h);

} // namespace agrosim::plant

#include "agrosim/plant/rk4.ipp"
