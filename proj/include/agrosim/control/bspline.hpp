#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace agrosim::control {

/// The three active basis functions of a quadratic uniform cyclic B-spline at one phase.
struct BasisEval {
    std::array<std::size_t, 3> index{};
    std::array<double, 3> value{};
};

/// Basis at phase `phi` for `knots` uniform knots on the unit circle.
/// Phases outside [0, 1) are wrapped.
BasisEval bspline_basis(double phi, std::size_t knots);

/// Cyclic quadratic B-spline network trained by LMS.
///
/// `leak` shrinks all weights by leak * output on each adaptation step, which
/// keeps the network from absorbing a constant offset that a feedback
/// integrator already handles. With leak = 0 the update is plain LMS.
class BSplineNetwork {
public:
    explicit BSplineNetwork(std::size_t knots = 16, double rate = 0.2, double leak = 0.0);

    double output(double phi) const;
    /// w_i += rate * e * B_i(phi) for the active functions, after the leak.
    void adapt(double phi, double error);
    /// Output at `phi`, then adapt on `error` when requested. Returns the pre-update output.
    double step(double phi, double error, bool adapt);

    const std::vector<double>& weights() const { return weights_; }
    std::vector<double>& weights() { return weights_; }
    std::size_t knots() const { return weights_.size(); }
    double rate() const { return rate_; }
    double leak() const { return leak_; }
    void reset();

private:
    std::vector<double> weights_;
    double rate_;
    double leak_;
};

} // namespace agrosim::control
