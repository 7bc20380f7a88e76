#pragma once

#include <cstddef>
#include <vector>

namespace agrosim::control {

/// Sliding mean over the last N samples. The buffer starts zero-filled, so the
/// first N-1 outputs ramp up from zero.
class RunningAverage {
public:
    explicit RunningAverage(std::size_t window = 25);

    double step(double x);
    void reset();
    std::size_t window() const { return buffer_.size(); }

private:
    std::vector<double> buffer_;
    std::size_t next_ = 0;
    double sum_ = 0.0;
};

/// Difference-equation coefficients with a0 normalized to 1.
struct BiquadCoefficients {
    double b0 = 1.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;

    double dc_gain() const { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
    /// Both poles strictly inside the unit circle.
    bool stable() const;
};

/// 2nd-order Butterworth low-pass by bilinear transform with prewarping.
/// Throws InvalidCutoff unless 0 < f_cut < f_sample/2.
BiquadCoefficients butterworth_lowpass(double f_cut, double f_sample);

/// Biquad section in direct form II transposed.
class BiquadFilter {
public:
    explicit BiquadFilter(BiquadCoefficients c = {}) : c_(c) {}

    double step(double x) {
        const double y = c_.b0 * x + s1_;
        s1_ = c_.b1 * x - c_.a1 * y + s2_;
        s2_ = c_.b2 * x - c_.a2 * y;
        return y;
    }
    void reset() { s1_ = s2_ = 0.0; }
    const BiquadCoefficients& coefficients() const { return c_; }

private:
    BiquadCoefficients c_;
    double s1_ = 0.0;
    double s2_ = 0.0;
};

} // namespace agrosim::control
