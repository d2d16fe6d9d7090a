#pragma once

#include "core/devices.hpp"

#include <optional>

namespace owu {

// Fixed-topology wake-up receiver, first design. The solar cell feeds the
// R1/R2 divider through its source resistance; C1 holds the ambient
// baseline on node B1 (the PMOS1 gate, source at the solar node). PMOS1's
// drain drives the NMOS1 gate against the 10 Mohm gate-source resistor;
// NMOS1 pulls the PMOS2 gate down through the 3.3 Mohm supply pull-up, and
// PMOS2 connects the microcontroller rail.
struct Design1Netlist {
    double r1_ohm = 1.33e6;
    double r2_ohm = 1.13e6;
    double c1_f = 470e-9;
    double r_gs_nmos1_ohm = 10e6;
    double r_aux_ohm = 3.3e6; // NMOS1 drain pull-up to the supply rail
    double supply_voltage_v = 2.8;
    double c_gate_nmos1_f = 50e-12;
    double r_mcu_load_ohm = 2333.0; // 1.2 mA at 2.8 V when connected
    // The cell's source resistance follows its quiescent operating point,
    // not the instantaneous flash; this sets the tracking lag.
    double r_sc_tracking_tau_s = 0.5;
    MosfetParams pmos1;
    MosfetParams nmos1;
    MosfetParams pmos2;
    SolarCellModel solar;

    void validate() const;
};

Design1Netlist default_design1();

// Second design: phototransistor pulls the NMOS1 gate up from the supply,
// the coated LDR leaks it to ground, tracking ambient with its slow
// resistance response.
struct Design2Netlist {
    PhototransistorModel pt;
    LdrModel ldr;
    MosfetParams nmos1;
    MosfetParams pmos_chain;
    double r_bias_ohm = 3.3e6; // NMOS1 drain pull-up
    double supply_voltage_v = 2.8;
    double c_gate_nmos1_f = 50e-12;
    double r_mcu_load_ohm = 2333.0;

    void validate() const;
};

Design2Netlist default_design2();

struct CircuitState {
    double t = 0.0;
    double v_sc = 0.0;          // solar-cell node
    double v_b1 = 0.0;          // divider/capacitor node (PMOS1 gate)
    double v_gate_nmos1 = 0.0;
    double v_drain_nmos1 = 0.0; // PMOS2 gate
    double v_mcu = 0.0;
    bool mcu_connected = false;
    double supply_current = 0.0;
    double lux_track = 0.0;      // slow illuminance estimate for R_sc
    double ldr_resistance = 0.0; // Design 2 only
    double pt_current = 0.0;     // Design 2 only
    bool hold = false;           // MCU-side latch (NMOS2)
    bool hold_warning = false;
};

struct StepControl {
    bool mosfets_disabled = false; // linear-regime oracle support
    // When set, the solar node is pinned externally (harvesting front-end
    // demonstrations) instead of following the cell.
    std::optional<double> forced_v_sc;
};

double equivalent_resistance(double r_sc, double r1, double r2);
double adaptation_time(double r_e, double c);

// Suggested integrator step for resolving the fastest state in each design.
double recommended_dt_design1(const Design1Netlist& n);
double recommended_dt_design2(const Design2Netlist& n);

// Static operating point at constant illuminance.
CircuitState settle_design1(const Design1Netlist& n, double lux);
CircuitState settle_design2(const Design2Netlist& n, double lux);

// Advance one fixed step. lux_total is ambient plus the flash contribution
// already converted through the cell's flash coupling.
CircuitState step_design1(const Design1Netlist& n, const CircuitState& s,
                          double lux_total, double dt,
                          const StepControl& ctl = {});

CircuitState step_design2(const Design2Netlist& n, const CircuitState& s,
                          double lux_ambient, double irradiance_flash_w_m2,
                          double dt);

// Steady supply draw at constant illuminance.
double standby_current_design1(const Design1Netlist& n, double lux);
double standby_current_design2(const Design2Netlist& n, double lux);

CircuitState mcu_hold_and_release(const CircuitState& s, bool hold);

// Harvesting front-ends (shared solar cell, Fig. 4 behaviour).
struct HarvestFrontEnd {
    enum class Kind { PmicMppt, Schottky };
    Kind kind = Kind::PmicMppt;
    double clamp_fraction = 0.8;    // MPPT setpoint as a fraction of Voc
    double mppt_tracking_tau_s = 2.0;
    double schottky_drop_v = 0.3;   // within [0.15, 0.45]
    double storage_voltage_v = 1.5;
    double storage_capacitance_f = 0.1;

    void validate() const;
};

struct FrontEndState {
    double v_track = 0.0;   // MPPT's slow estimate of the operating Voc
    double v_storage = 0.0;
};

struct FrontEndOutput {
    double v_sc = 0.0;
    double harvested_power_w = 0.0;
};

FrontEndOutput step_frontend(const HarvestFrontEnd& fe, FrontEndState& fs,
                             const SolarCellModel& cell, double lux_total,
                             double dt);

} // namespace owu
