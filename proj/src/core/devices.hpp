#pragma once

#include <utility>
#include <vector>

namespace owu {

// Piecewise monotone-cubic curve in (ln lux, ln ohm) space used for the
// lux-dependent source resistance of the solar cell. Control points are
// calibration parameters; the shape is free.
struct LuxResistanceCurve {
    std::vector<std::pair<double, double>> points; // (lux, ohms), lux ascending

    double at(double lux) const;
    void validate() const;
};

// Behavioral solar-cell model: open-circuit voltage follows a log law
// through two measured anchors, saturating above a knee; the cell drives
// the sense network through a lux-dependent source resistance.
struct SolarCellModel {
    double area_mm2 = 80.0;               // 8 mm x 10 mm wake-up cell
    double voc_coeff_a = -0.04828902;     // volts, fit anchor intercept
    double voc_coeff_b = 0.10820212;      // volts per ln(lux)
    double knee_lux = 2000.0;             // Voc slope breaks here
    double knee_coeff_b = 0.02;           // post-knee volts per ln(lux)
    double response_time_ref_s = 1e-3;    // 1 ms ...
    double response_area_ref_mm2 = 375.0; // ... for a 25 mm x 15 mm cell
    // Lux-equivalent per W/m^2 of LED flash light as seen by this cell.
    // Calibration constant; absorbs the unknown flash illuminance scale.
    double flash_lux_per_w_m2 = 15000.0;
    LuxResistanceCurve series_resistance;

    void validate() const;
};

SolarCellModel default_wakeup_cell();   // SC1, 8 mm x 10 mm
SolarCellModel default_harvest_cell();  // SC2, 25 mm x 10 mm

double solar_voc(const SolarCellModel& m, double lux);
double solar_response_time(const SolarCellModel& m);
double solar_series_resistance(const SolarCellModel& m, double lux);

struct PhototransistorModel {
    double sensitive_area_mm2 = 0.29;
    double responsivity_a_per_w_m2 = 60e-6; // collector amps per W/m^2, uncoated
    double response_time_on_s = 90e-6;      // at the reference current below
    double response_time_off_s = 90e-6;
    double response_ref_current_a = 100e-6; // speed scales with collector current
    double response_time_max_s = 0.05;      // low-current slowdown clamp
    double coating_attenuation = 1.0;       // (0, 1]
    double ambient_efficacy_lm_per_w = 300.0;
    double dark_current_a = 5e-9;

    void validate() const;
};

double pt_collector_current(const PhototransistorModel& m, double irradiance_w_m2,
                            double ambient_lux);
// Effective first-order response time at a target collector current.
double pt_response_time(const PhototransistorModel& m, double target_current_a,
                        bool turning_on);

struct LdrModel {
    double r0_ohm = 1.4493e6;  // resistance at 1 lux (power-law scale)
    double gamma = 1.0805;     // resistance ~ lux^-gamma
    double dark_resistance_ohm = 10e6;
    double tau_fall_s = 0.010; // brightening (resistance drop)
    double tau_rise_s = 1.5;   // darkening (resistance recovery)
    double coating_attenuation = 1.0;

    void validate() const;
    double steady_resistance(double lux) const; // applies coating internally
};

double ldr_resistance_step(const LdrModel& m, double r_now, double lux, double dt);

struct MosfetParams {
    enum class Polarity { N, P };
    Polarity polarity = Polarity::N;
    double vgs_threshold_v = 0.5;        // N: > 0, P: < 0
    double subthreshold_swing_v = 0.09;  // volts per decade
    double off_current_floor_a = 10e-12;
    double on_resistance_ohm = 50.0;
    double threshold_current_a = 2e-6;   // current scale at vgs == vth

    void validate() const;
};

// Channel current flowing source -> drain, signed with vds. Three regimes:
// an off floor, a subthreshold exponential (one decade per swing volts of
// gate drive), and an ohmic on region; the branches meet continuously.
double mosfet_current(const MosfetParams& p, double vgs, double vds);

} // namespace owu
