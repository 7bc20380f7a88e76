#pragma once

#include <cstdint>

namespace agrosim::plant {

/// Rotary encoder with a spatially periodic multiplicative error, the stand-in
/// for the machine nonlinearity (sprocket pitch, track links) of the vehicle.
struct EncoderConfig {
    double ticks_per_meter = 1000.0;
    double dist_amplitude = 0.15;  ///< relative amplitude a, 0 <= a < 1
    double dist_wavelength = 0.7;  ///< m, spatial period
    double dist_phase = 0.0;       ///< rad

    void validate() const;
};

struct EncoderSample {
    std::int64_t ticks = 0;
    double v_measured = 0.0;
};

/// Cumulative distorted distance for true travel `s` (measured from s = 0):
/// the closed-form integral of 1 + a*sin(2*pi*s/lambda + phase).
double distorted_distance(double s, const EncoderConfig& cfg);

/// Cumulative tick count for true travel `s`.
std::int64_t cumulative_ticks(double s, const EncoderConfig& cfg);

/// Ticks and speed estimate for travel from `s_begin` to `s_end` during `window` seconds.
/// Travel may be negative (reverse motion yields negative ticks).
EncoderSample encoder_sample(double s_begin, double s_end, double v_true, const EncoderConfig& cfg, double window);

/// Stateful encoder remembering the travel at the previous sample.
class Encoder {
public:
    explicit Encoder(EncoderConfig cfg = {}) : cfg_(cfg) {}

    /// Sample at true travel `s`; the speed estimate spans the interval since the previous sample.
    EncoderSample sample(double s, double window);
    /// Re-reference the encoder at travel `s` without emitting ticks.
    void reset(double s) {
        last_s_ = s;
        total_ticks_ = 0;
    }
    std::int64_t total_ticks() const { return total_ticks_; }
    const EncoderConfig& config() const { return cfg_; }

private:
    EncoderConfig cfg_;
    double last_s_ = 0.0;
    std::int64_t total_ticks_ = 0;
};

} // namespace agrosim::plant
