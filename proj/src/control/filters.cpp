#include "agrosim/control/filters.hpp"

#include "agrosim/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace agrosim::control {

RunningAverage::RunningAverage(std::size_t window) {
    if (window == 0) throw ValidationError("controller.avg_window", "must be at least 1");
    buffer_.assign(window, 0.0);
}

double RunningAverage::step(double x) {
    sum_ += x - buffer_[next_];
    buffer_[next_] = x;
    next_ = (next_ + 1) % buffer_.size();
    // refresh the sum once per cycle so rounding cannot drift
    if (next_ == 0) {
        sum_ = 0.0;
        for (double v : buffer_) sum_ += v;
    }
    return sum_ / static_cast<double>(buffer_.size());
}

void RunningAverage::reset() {
    std::fill(buffer_.begin(), buffer_.end(), 0.0);
    next_ = 0;
    sum_ = 0.0;
}

bool BiquadCoefficients::stable() const {
    // roots of z^2 + a1 z + a2
    const std::complex<double> disc = std::sqrt(std::complex<double>(a1 * a1 - 4.0 * a2, 0.0));
    const auto r1 = (-a1 + disc) / 2.0;
    const auto r2 = (-a1 - disc) / 2.0;
    return std::abs(r1) < 1.0 && std::abs(r2) < 1.0;
}

BiquadCoefficients butterworth_lowpass(double f_cut, double f_sample) {
    if (!(f_sample > 0.0) || !(f_cut > 0.0) || !(f_cut < 0.5 * f_sample) || !std::isfinite(f_sample)) {
        throw InvalidCutoff("cutoff " + std::to_string(f_cut) + " Hz outside (0, " + std::to_string(0.5 * f_sample) +
                            ") Hz");
    }
    const double k = std::tan(std::numbers::pi * f_cut / f_sample);
    const double k2 = k * k;
    const double d = k2 + std::numbers::sqrt2 * k + 1.0;
    BiquadCoefficients c;
    c.b0 = k2 / d;
    c.b1 = 2.0 * k2 / d;
    c.b2 = k2 / d;
    c.a1 = 2.0 * (k2 - 1.0) / d;
    c.a2 = (k2 - std::numbers::sqrt2 * k + 1.0) / d;
    return c;
}

} // namespace agrosim::control
