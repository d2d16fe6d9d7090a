#pragma once

#include "core/circuit.hpp"
#include "core/noise.hpp"
#include "core/optics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace owu {

struct McuProfile {
    double active_current_a = 1.2e-3; // at supply voltage
    double t_validate_s = 0.010;
    double t_measure_s = 0.050;
    double t_transmit_s = 0.100;
    double t_flash_forward_s = 0.050;

    void validate() const;
    double cycle_duration_s() const {
        return t_validate_s + t_measure_s + t_transmit_s + t_flash_forward_s;
    }
};

struct TrialConfig {
    int design = 1;
    double ambient_lux = 400.0;
    double distance_m = 0.25;
    int pulses = 100;
    double pulse_period_s = 5.0;
    std::uint64_t rng_seed = 12345;
    NoiseModel noise;

    void validate(double pulse_duration_s) const;
};

struct NetsimConfig {
    McuProfile mcu;
    double storage_capacitance_f = 0.1;
    double storage_initial_v = 2.8;
    double conversion_efficiency = 0.8;
    double brownout_energy_j = 1e-3;
    bool use_detection_cache = true;

    void validate() const;
};

struct SweepConfig {
    std::vector<double> r1_list = {0.5e6, 1.33e6, 2.0e6};
    std::vector<double> r2_list = {0.5e6, 1.13e6, 2.0e6};
    std::vector<double> c1_list = {100e-9, 470e-9, 1e-6};
    std::string objective = "pareto"; // max_range | min_standby | pareto
    double reference_lux = 400.0;

    void validate() const;
};

// Full parameter set of the toolkit; the configuration file surface maps
// one-to-one onto these fields.
struct Parameters {
    double efficacy_lm_per_w = kDefaultEfficacyLmPerW;
    OpticalSource transmitter;
    Design1Netlist design1;
    Design2Netlist design2;
    HarvestFrontEnd frontend;
    NoiseModel noise;
    TrialConfig trial;
    NetsimConfig netsim;
    SweepConfig sweep;
    std::vector<double> grid_lux = {0.0, 400.0, 800.0, 1600.0, 2000.0};
    std::vector<double> grid_distance = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    double race_distance_m = 0.05;
    int race_repeats = 10;

    static Parameters defaults();
    void validate() const;

    // Flash illuminance-equivalent at the wake-up cell for a given
    // transmitter irradiance.
    double flash_lux(double irradiance_w_m2) const {
        return irradiance_w_m2 * design1.solar.flash_lux_per_w_m2;
    }
};

} // namespace owu
