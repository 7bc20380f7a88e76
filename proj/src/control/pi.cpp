#include "agrosim/control/pi.hpp"

#include "agrosim/error.hpp"

#include <algorithm>
#include <cmath>

namespace agrosim::control {

void PIConfig::validate() const {
    if (!std::isfinite(kp) || kp < 0.0) throw ValidationError("controller.kp", "must be finite and >= 0");
    if (!std::isfinite(ki) || ki < 0.0) throw ValidationError("controller.ki", "must be finite and >= 0");
    if (!std::isfinite(u_min) || !std::isfinite(u_max) || !(u_min < u_max)) {
        throw ValidationError("controller.u_limits", "need finite u_min < u_max");
    }
}

PIController::PIController(PIConfig cfg) : cfg_(cfg) {
    cfg_.validate();
}

double PIController::step(double setpoint, double measured, double dt) {
    const double e = setpoint - measured;
    const double u_raw = cfg_.kp * e + integrator_ + cfg_.ki * e * dt;
    const bool winding_up = (u_raw > cfg_.u_max && e > 0.0) || (u_raw < cfg_.u_min && e < 0.0);
    if (!winding_up) integrator_ = std::clamp(integrator_ + cfg_.ki * e * dt, cfg_.u_min, cfg_.u_max);
    return std::clamp(u_raw, cfg_.u_min, cfg_.u_max);
}

} // namespace agrosim::control
