#include "agrosim/control/bspline.hpp"

#include "agrosim/error.hpp"

#include <algorithm>
#include <cmath>

namespace agrosim::control {

BasisEval bspline_basis(double phi, std::size_t knots) {
    phi -= std::floor(phi);
    const double g = phi * static_cast<double>(knots);
    // phi just below 1 can round g up to K
    const auto j = std::min(static_cast<std::size_t>(g), knots - 1);
    const double t = g - static_cast<double>(j);
    BasisEval b;
    b.index = {(j + knots - 1) % knots, j, (j + 1) % knots};
    b.value = {0.5 * (1.0 - t) * (1.0 - t), 0.5 * (-2.0 * t * t + 2.0 * t + 1.0), 0.5 * t * t};
    return b;
}

BSplineNetwork::BSplineNetwork(std::size_t knots, double rate, double leak)
    : weights_(knots, 0.0), rate_(rate), leak_(leak) {
    if (knots < 3) throw ValidationError("controller.lffc_knots", "need at least 3 knots");
    if (!std::isfinite(rate) || rate <= 0.0) throw ValidationError("controller.lffc_rate", "must be > 0");
    if (!std::isfinite(leak) || leak < 0.0 || leak >= 1.0) {
        throw ValidationError("controller.lffc_leak", "must be in [0, 1)");
    }
}

double BSplineNetwork::output(double phi) const {
    const BasisEval b = bspline_basis(phi, weights_.size());
    double y = 0.0;
    for (std::size_t k = 0; k < 3; ++k) y += weights_[b.index[k]] * b.value[k];
    return y;
}

void BSplineNetwork::adapt(double phi, double error) {
    if (leak_ > 0.0) {
        const double shrink = leak_ * output(phi);
        for (double& w : weights_) w -= shrink;
    }
    const BasisEval b = bspline_basis(phi, weights_.size());
    for (std::size_t k = 0; k < 3; ++k) weights_[b.index[k]] += rate_ * error * b.value[k];
}

double BSplineNetwork::step(double phi, double error, bool do_adapt) {
    const double y = output(phi);
    if (do_adapt) adapt(phi, error);
    return y;
}

void BSplineNetwork::reset() {
    std::fill(weights_.begin(), weights_.end(), 0.0);
}

} // namespace agrosim::control
