#include "core/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace owu {

void NoiseModel::validate() const {
    if (ambient_flicker_sd_frac < 0.0 || amplitude_jitter_frac < 0.0)
        throw std::invalid_argument("noise standard deviations must be >= 0");
    if (!(flicker_bandwidth_hz > 0.0))
        throw std::invalid_argument("flicker bandwidth must be > 0");
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

FlickerProcess::FlickerProcess(const NoiseModel& model, std::uint64_t seed)
    : tau_(1.0 / (2.0 * std::numbers::pi * model.flicker_bandwidth_hz)),
      rng_(seed) {
    // Start from the stationary distribution.
    value_ = gauss_(rng_);
}

double FlickerProcess::step(double dt) {
    const double a = std::exp(-dt / tau_);
    value_ = a * value_ + std::sqrt(1.0 - a * a) * gauss_(rng_);
    return value_;
}

} // namespace owu
