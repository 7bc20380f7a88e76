#pragma once

#include "agrosim/error.hpp"

#include <stdexcept>

namespace agrosim::plant {

template <VehicleModel Model>
VehicleState rk4_step(const Model& model, const VehicleState& state, const typename Model::Command& cmd, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("rk4_step: h must be positive");

    const VehicleState k1 = model.derivative(state, cmd);
    const VehicleState k2 = model.derivative(state + (0.5 * h) * k1, cmd);
    const VehicleState k3 = model.derivative(state + (0.5 * h) * k2, cmd);
    const VehicleState k4 = model.derivative(state + h * k3, cmd);

    VehicleState next = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    model.settle(next, cmd, h);
    if (!next.finite()) throw NonFiniteState(0.0, "rk4_step");
    return next;
}

} // namespace agrosim::plant
