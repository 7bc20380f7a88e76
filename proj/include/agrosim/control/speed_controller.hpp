#pragma once

#include "agrosim/control/bspline.hpp"
#include "agrosim/control/filters.hpp"
#include "agrosim/control/pi.hpp"

#include <cstddef>
#include <string>

namespace agrosim::control {

/// The four iterations of the encoder-feedback speed loop.
enum class SpeedVariant { Raw, RunningAvg, Butterworth, Lffc };

/// Short names: raw, avg, butter, lffc.
const char* to_string(SpeedVariant v);
/// Accepts the short names. Throws ValidationError("controller.variant", ...).
SpeedVariant speed_variant_from_string(const std::string& name);

struct SpeedControllerConfig {
    SpeedVariant variant = SpeedVariant::Raw;
    PIConfig pi;
    std::size_t avg_window = 25;
    double butter_cutoff = 2.0; ///< Hz
    std::size_t lffc_knots = 16;
    double lffc_rate = 0.2;
    double lffc_leak = 0.01;
    double lffc_min_speed = 0.1; ///< m/s, no adaptation below this setpoint magnitude

    /// `sample_rate` is 1/de_period, needed to check the cutoff.
    void validate(double sample_rate) const;
};

/// One track's speed loop.
///
/// Raw, RunningAvg and Butterworth feed the (filtered) encoder speed to the PI.
/// Lffc adds the learned disturbance estimate u_ff(phase) to the Butterworth
/// output, so the PI sees the corrected speed; the network adapts on the
/// remaining error between setpoint and corrected speed.
class SpeedController {
public:
    SpeedController(const SpeedControllerConfig& cfg, double dt);

    /// `phase` is the disturbance phase in [0, 1), only used by Lffc.
    double step(double setpoint, double v_measured, double phase);
    void reset();

    SpeedVariant variant() const { return cfg_.variant; }
    const SpeedControllerConfig& config() const { return cfg_; }
    /// Feedback signal the PI saw in the last step.
    double last_feedback() const { return last_feedback_; }
    double last_feedforward() const { return last_ff_; }
    const BSplineNetwork& network() const { return net_; }
    const PIController& pi() const { return pi_; }

private:
    SpeedControllerConfig cfg_;
    double dt_;
    PIController pi_;
    RunningAverage avg_;
    BiquadFilter biquad_;
    BSplineNetwork net_;
    double last_feedback_ = 0.0;
    double last_ff_ = 0.0;
};

} // namespace agrosim::control
