#include "agrosim/plant/encoder.hpp"

#include "agrosim/error.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace agrosim::plant {

void EncoderConfig::validate() const {
    if (!(ticks_per_meter > 0.0)) throw ValidationError("encoder.ticks_per_meter", "must be positive");
    if (!(dist_amplitude >= 0.0 && dist_amplitude < 1.0)) {
        throw ValidationError("encoder.dist_amplitude", "must lie in [0, 1)");
    }
    if (!(dist_wavelength > 0.0)) throw ValidationError("encoder.dist_wavelength", "must be positive");
    if (!std::isfinite(dist_phase)) throw ValidationError("encoder.dist_phase", "must be finite");
}

double distorted_distance(double s, const EncoderConfig& cfg) {
    if (cfg.dist_amplitude == 0.0) return s;
    const double k = 2.0 * std::numbers::pi / cfg.dist_wavelength;
    return s + cfg.dist_amplitude / k * (std::cos(cfg.dist_phase) - std::cos(k * s + cfg.dist_phase));
}

std::int64_t cumulative_ticks(double s, const EncoderConfig& cfg) {
    return static_cast<std::int64_t>(std::floor(cfg.ticks_per_meter * distorted_distance(s, cfg)));
}

EncoderSample encoder_sample(double s_begin, double s_end, double /*v_true*/, const EncoderConfig& cfg,
                             double window) {
    if (!(window > 0.0)) throw std::invalid_argument("encoder_sample: window must be positive");
    EncoderSample out;
    out.ticks = cumulative_ticks(s_end, cfg) - cumulative_ticks(s_begin, cfg);
    out.v_measured = static_cast<double>(out.ticks) / (cfg.ticks_per_meter * window);
    return out;
}

EncoderSample Encoder::sample(double s, double window) {
    EncoderSample out = encoder_sample(last_s_, s, 0.0, cfg_, window);
    last_s_ = s;
    total_ticks_ += out.ticks;
    return out;
}

} // namespace agrosim::plant
