#pragma once

#include <cstdint>
#include <random>

namespace owu {

struct NoiseModel {
    double ambient_flicker_sd_frac = 0.02; // sd as fraction of ambient lux
    double flicker_bandwidth_hz = 100.0;   // band limit of the fluctuation
    double amplitude_jitter_frac = 0.03;   // relative sd of flash power

    void validate() const;
    bool is_zero() const {
        return ambient_flicker_sd_frac == 0.0 && amplitude_jitter_frac == 0.0;
    }
};

// splitmix64; used to derive independent per-cell seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c);

// Ornstein-Uhlenbeck flicker generator: zero-mean, unit-sd, band-limited at
// the model bandwidth. Scaled by the caller to the local ambient level.
class FlickerProcess {
  public:
    FlickerProcess(const NoiseModel& model, std::uint64_t seed);
    // Advance by dt and return the current normalized (unit-sd) value.
    double step(double dt);
    double value() const { return value_; }

  private:
    double tau_;
    double value_ = 0.0;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

} // namespace owu
