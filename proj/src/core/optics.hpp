#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace owu {

// Photometric conversion used wherever a generic lux <-> W/m^2 bridge is
// needed (phototransistor ambient equivalent, LDR flash exposure).
inline constexpr double kDefaultEfficacyLmPerW = 300.0;

struct PulseShape {
    double duration_s = 0.05;   // configurable 1 ms .. 500 ms
    double rise_s = 0.0;        // trapezoidal edges; 0/0 = rectangular
    double fall_s = 0.0;

    void validate() const;
    // Relative envelope in [0,1] at time t since pulse onset.
    double envelope(double t) const;
};

struct OpticalSource {
    double optical_power_w = 0.020;   // radiant flux
    double viewing_angle_deg = 120.0; // full angle at half intensity
    double position[3] = {0.0, 0.0, 0.0};
    double orientation[3] = {1.0, 0.0, 0.0}; // unit vector
    PulseShape pulse;

    void validate() const;
};

struct LinkGeometry {
    double distance_m = 0.25;
    double emission_angle_deg = 0.0;  // off source axis
    double incidence_angle_deg = 0.0; // off detector normal

    void validate() const;
};

// Time-varying background illuminance. Segments are evaluated over
// half-open intervals [start_i, start_{i+1}); the last segment persists.
struct AmbientProfile {
    enum class Kind { Constant, LinearRamp, Step };
    struct Segment {
        double start_s = 0.0;
        Kind kind = Kind::Constant;
        double lux_a = 0.0; // constant/step level, or ramp start
        double lux_b = 0.0; // ramp end (unused otherwise)
    };
    std::vector<Segment> segments;

    static AmbientProfile constant(double lux);
    void validate() const;
    double at(double t) const;
    // Largest lux anywhere on the profile (for precondition checks).
    double max_lux() const;
};

// Generalized Lambertian order from the half-intensity viewing angle.
double lambertian_order(double viewing_angle_deg);

// On-detector irradiance of the source at the given geometry, W/m^2.
double irradiance(const OpticalSource& src, const LinkGeometry& geom);

double illuminance_from_irradiance(double e_w_per_m2, double efficacy_lm_per_w);

// Irradiance between two positioned nodes; emission/incidence angles are
// derived from positions and orientations (2D or 3D points).
double irradiance_between(const OpticalSource& src, const double rx_pos[3],
                          const double rx_normal[3]);

} // namespace owu
