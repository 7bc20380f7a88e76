#include "agrosim/plant/vehicle.hpp"

#include "agrosim/error.hpp"

#include <algorithm>
#include <numbers>

namespace agrosim::plant {

void DiffDriveParams::validate() const {
    if (!(track_width > 0.0)) throw ValidationError("vehicle.track_width", "must be positive");
    if (!(actuator_tau >= 0.0)) throw ValidationError("vehicle.actuator_tau", "must be non-negative");
    if (!(v_max > 0.0)) throw ValidationError("vehicle.v_max", "must be positive");
}

void SteeredParams::validate() const {
    if (!(wheelbase > 0.0)) throw ValidationError("vehicle.wheelbase", "must be positive");
    if (!(steer_limit > 0.0 && steer_limit < std::numbers::pi / 2)) {
        throw ValidationError("vehicle.steer_limit", "must lie in (0, pi/2)");
    }
    if (!(steer_rate_limit > 0.0)) throw ValidationError("vehicle.steer_rate_limit", "must be positive");
    if (!(steer_tau >= 0.0)) throw ValidationError("vehicle.steer_tau", "must be non-negative");
    if (!(actuator_tau >= 0.0)) throw ValidationError("vehicle.actuator_tau", "must be non-negative");
    if (!(v_max > 0.0)) throw ValidationError("vehicle.v_max", "must be positive");
}

bool VehicleState::finite() const {
    for (double f : {x, y, theta, v_left, v_right, v, delta, s, odo_left, odo_right, odo}) {
        if (!std::isfinite(f)) return false;
    }
    return true;
}

VehicleState& VehicleState::operator+=(const VehicleState& o) {
    x += o.x;
    y += o.y;
    theta += o.theta;
    v_left += o.v_left;
    v_right += o.v_right;
    v += o.v;
    delta += o.delta;
    s += o.s;
    odo_left += o.odo_left;
    odo_right += o.odo_right;
    odo += o.odo;
    return *this;
}

VehicleState& VehicleState::operator*=(double k) {
    x *= k;
    y *= k;
    theta *= k;
    v_left *= k;
    v_right *= k;
    v *= k;
    delta *= k;
    s *= k;
    odo_left *= k;
    odo_right *= k;
    odo *= k;
    return *this;
}

VehicleState diff_drive_derivative(const VehicleState& state, const DiffDriveCommand& cmd, const DiffDriveParams& p) {
    const double target_l = saturate(cmd.left, p.v_max);
    const double target_r = saturate(cmd.right, p.v_max);
    const bool lag = p.actuator_tau > 0.0;
    const double vl = lag ? state.v_left : target_l;
    const double vr = lag ? state.v_right : target_r;

    const double v = 0.5 * (vl + vr);
    const double omega = (vr - vl) / p.track_width;

    VehicleState d;
    d.x = v * std::cos(state.theta);
    d.y = v * std::sin(state.theta);
    d.theta = omega;
    if (lag) {
        d.v_left = (target_l - state.v_left) / p.actuator_tau;
        d.v_right = (target_r - state.v_right) / p.actuator_tau;
    }
    d.s = std::abs(v);
    d.odo_left = vl;
    d.odo_right = vr;
    return d;
}

VehicleState steered_derivative(const VehicleState& state, const SteeredCommand& cmd, const SteeredParams& p) {
    const double target_v = saturate(cmd.speed, p.v_max);
    const double target_delta = saturate(cmd.steer, p.steer_limit);
    const bool lag = p.actuator_tau > 0.0;
    const double v = lag ? state.v : target_v;

    const double sign = p.steered_axle == SteeredAxle::Front ? 1.0 : -1.0;

    VehicleState d;
    d.x = v * std::cos(state.theta);
    d.y = v * std::sin(state.theta);
    d.theta = sign * v * std::tan(state.delta) / p.wheelbase;
    if (lag) d.v = (target_v - state.v) / p.actuator_tau;
    if (p.steer_tau > 0.0) {
        d.delta = std::clamp((target_delta - state.delta) / p.steer_tau, -p.steer_rate_limit, p.steer_rate_limit);
    }
    d.s = std::abs(v);
    d.odo = v;
    return d;
}

void DiffDriveModel::settle(VehicleState& s, const Command& c, double /*h*/) const {
    if (params.actuator_tau > 0.0) {
        s.v_left = saturate(s.v_left, params.v_max);
        s.v_right = saturate(s.v_right, params.v_max);
    } else {
        s.v_left = saturate(c.left, params.v_max);
        s.v_right = saturate(c.right, params.v_max);
    }
}

void SteeredModel::settle(VehicleState& s, const Command& c, double h) const {
    if (params.actuator_tau > 0.0) {
        s.v = saturate(s.v, params.v_max);
    } else {
        s.v = saturate(c.speed, params.v_max);
    }
    if (params.steer_tau <= 0.0) {
        const double target = saturate(c.steer, params.steer_limit);
        const double max_move = params.steer_rate_limit * h;
        s.delta += std::clamp(target - s.delta, -max_move, max_move);
    }
    s.delta = saturate(s.delta, params.steer_limit);
}

} // namespace agrosim::plant
