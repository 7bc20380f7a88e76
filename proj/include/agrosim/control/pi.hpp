#pragma once

namespace agrosim::control {

struct PIConfig {
    double kp = 0.2;
    double ki = 1.0;
    double u_min = -2.0;
    double u_max = 2.0;

    void validate() const;
};

/// PI feedback with conditional-integration anti-windup.
///
/// The integrator only accumulates while the output is not pushed further into
/// saturation, and is itself kept within [u_min, u_max].
class PIController {
public:
    explicit PIController(PIConfig cfg = {});

    double step(double setpoint, double measured, double dt);
    void reset() { integrator_ = 0.0; }

    double integrator() const { return integrator_; }
    const PIConfig& config() const { return cfg_; }

private:
    PIConfig cfg_;
    double integrator_ = 0.0;
};

} // namespace agrosim::control
