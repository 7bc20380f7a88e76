#include "agrosim/control/speed_controller.hpp"

#include "agrosim/error.hpp"

#include <cmath>

namespace agrosim::control {

const char* to_string(SpeedVariant v) {
    switch (v) {
    case SpeedVariant::Raw: return "raw";
    case SpeedVariant::RunningAvg: return "avg";
    case SpeedVariant::Butterworth: return "butter";
    case SpeedVariant::Lffc: return "lffc";
    }
    return "?";
}

SpeedVariant speed_variant_from_string(const std::string& name) {
    if (name == "raw") return SpeedVariant::Raw;
    if (name == "avg") return SpeedVariant::RunningAvg;
    if (name == "butter") return SpeedVariant::Butterworth;
    if (name == "lffc") return SpeedVariant::Lffc;
    throw ValidationError("controller.variant", "unknown variant '" + name + "' (expected raw, avg, butter, lffc)");
}

void SpeedControllerConfig::validate(double sample_rate) const {
    pi.validate();
    if (avg_window == 0) throw ValidationError("controller.avg_window", "must be at least 1");
    const bool filtered = variant == SpeedVariant::Butterworth || variant == SpeedVariant::Lffc;
    if (filtered && (!(butter_cutoff > 0.0) || !(butter_cutoff < 0.5 * sample_rate))) {
        throw ValidationError("controller.butter_cutoff", "must lie in (0, f_sample/2)");
    }
    if (lffc_knots < 3) throw ValidationError("controller.lffc_knots", "need at least 3 knots");
    if (!(lffc_rate > 0.0) || !std::isfinite(lffc_rate)) throw ValidationError("controller.lffc_rate", "must be > 0");
    if (!(lffc_leak >= 0.0 && lffc_leak < 1.0)) throw ValidationError("controller.lffc_leak", "must be in [0, 1)");
    if (!(lffc_min_speed >= 0.0) || !std::isfinite(lffc_min_speed)) {
        throw ValidationError("controller.lffc_min_speed", "must be >= 0");
    }
}

SpeedController::SpeedController(const SpeedControllerConfig& cfg, double dt)
    : cfg_(cfg), dt_(dt), pi_(cfg.pi), avg_(cfg.avg_window), net_(cfg.lffc_knots, cfg.lffc_rate, cfg.lffc_leak) {
    if (!(dt > 0.0)) throw ValidationError("sync.de_period", "must be > 0");
    cfg_.validate(1.0 / dt);
    if (cfg_.variant == SpeedVariant::Butterworth || cfg_.variant == SpeedVariant::Lffc) {
        biquad_ = BiquadFilter(butterworth_lowpass(cfg_.butter_cutoff, 1.0 / dt));
    }
}

double SpeedController::step(double setpoint, double v_measured, double phase) {
    double y = v_measured;
    last_ff_ = 0.0;
    switch (cfg_.variant) {
    case SpeedVariant::Raw: break;
    case SpeedVariant::RunningAvg: y = avg_.step(v_measured); break;
    case SpeedVariant::Butterworth: y = biquad_.step(v_measured); break;
    case SpeedVariant::Lffc: {
        const double filtered = biquad_.step(v_measured);
        last_ff_ = net_.output(phase);
        y = filtered + last_ff_;
        if (std::abs(setpoint) > cfg_.lffc_min_speed) net_.adapt(phase, setpoint - y);
        break;
    }
    }
    last_feedback_ = y;
    return pi_.step(setpoint, y, dt_);
}

void SpeedController::reset() {
    pi_.reset();
    avg_.reset();
    biquad_.reset();
    net_.reset();
    last_feedback_ = last_ff_ = 0.0;
}

} // namespace agrosim::control
