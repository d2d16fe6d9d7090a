#include "core/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owu {

namespace {

// Root of a strictly decreasing f on [lo, hi] by bisection.
template <typename F>
double bisect_decreasing(F&& f, double lo, double hi, int iters = 48) {
    double flo = f(lo);
    if (flo <= 0.0)
        return lo;
    if (f(hi) >= 0.0)
        return hi;
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Current sourced into the NMOS1 gate node by PMOS1 (source at v_sc).
double pmos1_current_into_gate(const Design1Netlist& n, double v_sc, double v_b1,
                               double v_g1) {
    // Drain current is negative when the channel sources current into the
    // drain node; flip the sign to get the charge delivered to the gate node.
    return -mosfet_current(n.pmos1, v_b1 - v_sc, v_g1 - v_sc);
}

// Solar node equilibrium: the cell EMF behind its source resistance loaded
// by the divider and by PMOS1's channel.
double solve_v_sc(const Design1Netlist& n, double voc, double r_sc, double v_b1,
                  double v_g1, bool mosfets_disabled) {
    auto f = [&](double v) {
        const double i_div = (v - v_b1) / n.r1_ohm;
        const double i_p1 =
            mosfets_disabled ? 0.0 : pmos1_current_into_gate(n, v, v_b1, v_g1);
        return voc - r_sc * (i_div + i_p1) - v;
    };
    return bisect_decreasing(f, -1.0, 6.0);
}

// NMOS1 drain node: pull-up against the NMOS1 channel.
double solve_v_d1(const MosfetParams& nmos, double v_g1, double r_pull,
                  double vsup, bool mosfets_disabled) {
    if (vsup <= 0.0)
        return vsup;
    if (mosfets_disabled)
        return vsup;
    auto f = [&](double v) {
        return (vsup - v) / r_pull - mosfet_current(nmos, v_g1, v);
    };
    return bisect_decreasing(f, 0.0, vsup);
}

// MCU rail node: PMOS2 channel against the MCU load.
double solve_v_mcu(const MosfetParams& pmos, double v_gate, double vsup,
                   double r_load, bool mosfets_disabled, double* i_p2) {
    if (vsup <= 0.0 || mosfets_disabled) {
        if (i_p2)
            *i_p2 = 0.0;
        return 0.0;
    }
    auto f = [&](double v) {
        const double in = -mosfet_current(pmos, v_gate - vsup, v - vsup);
        return in - v / r_load;
    };
    const double v = bisect_decreasing(f, 0.0, vsup);
    if (i_p2)
        *i_p2 = std::max(0.0, -mosfet_current(pmos, v_gate - vsup, v - vsup));
    return v;
}

bool connected(double v_mcu, double vsup) {
    return vsup > 0.0 && v_mcu >= 0.95 * vsup;
}

void finish_design1_outputs(const Design1Netlist& n, CircuitState& s,
                            bool mosfets_disabled) {
    const double vsup = n.supply_voltage_v;
    s.v_drain_nmos1 =
        solve_v_d1(n.nmos1, s.v_gate_nmos1, n.r_aux_ohm, vsup, mosfets_disabled);
    const double pmos2_gate = s.hold ? 0.0 : s.v_drain_nmos1;
    double i_p2 = 0.0;
    s.v_mcu = solve_v_mcu(n.pmos2, pmos2_gate, vsup, n.r_mcu_load_ohm,
                          mosfets_disabled, &i_p2);
    const double i_aux = vsup > 0.0 ? (vsup - s.v_drain_nmos1) / n.r_aux_ohm : 0.0;
    s.supply_current = std::max(0.0, i_aux) + i_p2;
    s.mcu_connected = connected(s.v_mcu, vsup);
}

} // namespace

void Design1Netlist::validate() const {
    if (!(r1_ohm > 0.0) || !(r2_ohm > 0.0) || !(c1_f > 0.0))
        throw std::invalid_argument("design1: divider and C1 values must be > 0");
    if (!(r_gs_nmos1_ohm > 0.0) || !(r_aux_ohm > 0.0))
        throw std::invalid_argument("design1: gate/pull-up resistors must be > 0");
    if (!(supply_voltage_v > 0.0))
        throw std::invalid_argument("design1: supply voltage must be > 0");
    if (!(c_gate_nmos1_f > 0.0) || !(r_mcu_load_ohm > 0.0))
        throw std::invalid_argument("design1: gate capacitance and MCU load must be > 0");
    if (!(r_sc_tracking_tau_s > 0.0))
        throw std::invalid_argument("design1: R_sc tracking tau must be > 0");
    pmos1.validate();
    nmos1.validate();
    pmos2.validate();
    solar.validate();
    if (pmos1.polarity != MosfetParams::Polarity::P ||
        pmos2.polarity != MosfetParams::Polarity::P ||
        nmos1.polarity != MosfetParams::Polarity::N)
        throw std::invalid_argument("design1: transistor polarities are fixed");
}

Design1Netlist default_design1() {
    Design1Netlist n;
    n.solar = default_wakeup_cell();
    n.pmos1.polarity = MosfetParams::Polarity::P;
    n.pmos1.vgs_threshold_v = -0.565;
    n.pmos2.polarity = MosfetParams::Polarity::P;
    n.pmos2.vgs_threshold_v = -0.45;
    n.nmos1.polarity = MosfetParams::Polarity::N;
    n.nmos1.vgs_threshold_v = 0.402;
    return n;
}

void Design2Netlist::validate() const {
    pt.validate();
    ldr.validate();
    nmos1.validate();
    pmos_chain.validate();
    if (!(r_bias_ohm > 0.0) || !(supply_voltage_v > 0.0) ||
        !(c_gate_nmos1_f > 0.0) || !(r_mcu_load_ohm > 0.0))
        throw std::invalid_argument("design2: component values must be > 0");
}

Design2Netlist default_design2() {
    Design2Netlist n;
    n.pt.coating_attenuation = 0.02;
    n.ldr.coating_attenuation = 0.02;
    n.nmos1.polarity = MosfetParams::Polarity::N;
    n.nmos1.vgs_threshold_v = 0.402;
    n.pmos_chain.polarity = MosfetParams::Polarity::P;
    n.pmos_chain.vgs_threshold_v = -0.45;
    return n;
}

double equivalent_resistance(double r_sc, double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw std::domain_error("equivalent resistance needs r1 > 0 and r2 > 0");
    if (r_sc < 0.0)
        throw std::domain_error("equivalent resistance needs r_sc >= 0");
    return 1.0 / (1.0 / (r_sc + r1) + 1.0 / r2);
}

double adaptation_time(double r_e, double c) {
    if (!(r_e > 0.0) || !(c > 0.0))
        throw std::domain_error("adaptation time needs r_e > 0 and c > 0");
    return 5.0 * r_e * c;
}

double recommended_dt_design1(const Design1Netlist& n) {
    const double tau_sc = solar_response_time(n.solar);
    const double tau_gate = n.r_gs_nmos1_ohm * n.c_gate_nmos1_f;
    return std::min(tau_sc, tau_gate) / 20.0;
}

double recommended_dt_design2(const Design2Netlist& n) {
    const double tau_pt = n.pt.response_time_on_s;
    return std::min({n.ldr.tau_fall_s, 1e-3, std::max(tau_pt, 1e-5)}) / 20.0;
}

CircuitState settle_design1(const Design1Netlist& n, double lux) {
    n.validate();
    const double voc = solar_voc(n.solar, lux);
    const double r_sc = solar_series_resistance(n.solar, lux);
    CircuitState s;
    s.lux_track = lux;
    s.v_sc = voc;
    for (int it = 0; it < 400; ++it) {
        const double v_b1 = s.v_sc * n.r2_ohm / (n.r1_ohm + n.r2_ohm);
        // Gate node balances PMOS1's delivery against the 10 Mohm leak.
        auto fg = [&](double vg) {
            return pmos1_current_into_gate(n, s.v_sc, v_b1, vg) -
                   vg / n.r_gs_nmos1_ohm;
        };
        const double v_g1 = bisect_decreasing(fg, 0.0, std::max(s.v_sc, 1e-9));
        const double v_sc_new =
            solve_v_sc(n, voc, r_sc, v_b1, v_g1, false);
        const double dv = std::abs(v_sc_new - s.v_sc);
        s.v_sc = 0.5 * s.v_sc + 0.5 * v_sc_new;
        s.v_b1 = v_b1;
        s.v_gate_nmos1 = v_g1;
        if (dv < 1e-13)
            break;
    }
    finish_design1_outputs(n, s, false);
    return s;
}

CircuitState step_design1(const Design1Netlist& n, const CircuitState& s,
                          double lux_total, double dt, const StepControl& ctl) {
    if (!(dt > 0.0))
        throw std::invalid_argument("step_design1: dt must be > 0");
    CircuitState out = s;
    out.t = s.t + dt;

    const double voc = solar_voc(n.solar, lux_total);
    out.lux_track = lux_total + (s.lux_track - lux_total) *
                                    std::exp(-dt / n.r_sc_tracking_tau_s);
    const double r_sc = solar_series_resistance(n.solar, out.lux_track);
    const double tau_sc = solar_response_time(n.solar);

    // Solar node relaxes toward its loaded equilibrium with the cell's
    // junction time constant.
    double v_sc_new;
    if (ctl.forced_v_sc) {
        v_sc_new = *ctl.forced_v_sc;
    } else {
        const double v_eq = solve_v_sc(n, voc, r_sc, s.v_b1, s.v_gate_nmos1,
                                       ctl.mosfets_disabled);
        v_sc_new = v_eq + (s.v_sc - v_eq) * std::exp(-dt / tau_sc);
    }

    // C1 node, trapezoidal over the linear divider.
    const double g = 1.0 / n.r1_ohm + 1.0 / n.r2_ohm;
    const double gc = g / n.c1_f;
    const double target_old = s.v_sc / (n.r1_ohm * g);
    const double target_new = v_sc_new / (n.r1_ohm * g);
    const double h2 = 0.5 * dt * gc;
    out.v_b1 = (s.v_b1 * (1.0 - h2) + h2 * (target_old + target_new)) / (1.0 + h2);
    out.v_sc = v_sc_new;

    // NMOS1 gate: PMOS1 delivery explicit, 10 Mohm leak implicit.
    if (ctl.mosfets_disabled) {
        out.v_gate_nmos1 =
            s.v_gate_nmos1 / (1.0 + dt / (n.r_gs_nmos1_ohm * n.c_gate_nmos1_f));
    } else {
        const double i_in =
            pmos1_current_into_gate(n, out.v_sc, out.v_b1, s.v_gate_nmos1);
        const double vg = (s.v_gate_nmos1 + dt * i_in / n.c_gate_nmos1_f) /
                          (1.0 + dt / (n.r_gs_nmos1_ohm * n.c_gate_nmos1_f));
        out.v_gate_nmos1 = std::clamp(vg, 0.0, std::max(out.v_sc, s.v_gate_nmos1));
    }

    if (!std::isfinite(out.v_sc) || !std::isfinite(out.v_b1) ||
        !std::isfinite(out.v_gate_nmos1))
        throw std::runtime_error("step_design1: non-finite state (reduce dt)");

    finish_design1_outputs(n, out, ctl.mosfets_disabled);
    return out;
}

double standby_current_design1(const Design1Netlist& n, double lux) {
    return settle_design1(n, lux).supply_current;
}

CircuitState settle_design2(const Design2Netlist& n, double lux) {
    n.validate();
    CircuitState s;
    s.pt_current = pt_collector_current(n.pt, 0.0, lux);
    s.ldr_resistance = n.ldr.steady_resistance(lux);
    s.v_gate_nmos1 =
        std::min(s.pt_current * s.ldr_resistance, n.supply_voltage_v);
    const double vsup = n.supply_voltage_v;
    s.v_drain_nmos1 = solve_v_d1(n.nmos1, s.v_gate_nmos1, n.r_bias_ohm, vsup, false);
    double i_pm = 0.0;
    s.v_mcu = solve_v_mcu(n.pmos_chain, s.hold ? 0.0 : s.v_drain_nmos1, vsup,
                          n.r_mcu_load_ohm, false, &i_pm);
    s.supply_current = s.pt_current + (vsup - s.v_drain_nmos1) / n.r_bias_ohm + i_pm;
    s.mcu_connected = connected(s.v_mcu, vsup);
    return s;
}

CircuitState step_design2(const Design2Netlist& n, const CircuitState& s,
                          double lux_ambient, double irradiance_flash_w_m2,
                          double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("step_design2: dt must be > 0");
    CircuitState out = s;
    out.t = s.t + dt;

    // Collector current chases its target with a current-dependent lag.
    const double i_target =
        pt_collector_current(n.pt, irradiance_flash_w_m2, lux_ambient);
    const bool rising = i_target > s.pt_current;
    const double tau_pt = pt_response_time(n.pt, i_target, rising);
    out.pt_current = i_target + (s.pt_current - i_target) * std::exp(-dt / tau_pt);

    // The LDR sees the flash photometrically.
    const double flash_lux =
        irradiance_flash_w_m2 * n.pt.ambient_efficacy_lm_per_w;
    out.ldr_resistance =
        ldr_resistance_step(n.ldr, std::max(s.ldr_resistance, 1.0),
                            lux_ambient + flash_lux, dt);

    // Gate node: PT sources, LDR leaks; compliance-limited at the rail.
    const double tau_g = out.ldr_resistance * n.c_gate_nmos1_f;
    const double v_target =
        std::min(out.pt_current * out.ldr_resistance, n.supply_voltage_v);
    out.v_gate_nmos1 =
        v_target + (s.v_gate_nmos1 - v_target) * std::exp(-dt / tau_g);

    if (!std::isfinite(out.v_gate_nmos1) || !std::isfinite(out.pt_current))
        throw std::runtime_error("step_design2: non-finite state (reduce dt)");

    const double vsup = n.supply_voltage_v;
    out.v_drain_nmos1 =
        solve_v_d1(n.nmos1, out.v_gate_nmos1, n.r_bias_ohm, vsup, false);
    double i_pm = 0.0;
    out.v_mcu = solve_v_mcu(n.pmos_chain, out.hold ? 0.0 : out.v_drain_nmos1,
                            vsup, n.r_mcu_load_ohm, false, &i_pm);
    out.supply_current =
        out.pt_current + (vsup - out.v_drain_nmos1) / n.r_bias_ohm + i_pm;
    out.mcu_connected = connected(out.v_mcu, vsup);
    return out;
}

double standby_current_design2(const Design2Netlist& n, double lux) {
    return settle_design2(n, lux).supply_current;
}

CircuitState mcu_hold_and_release(const CircuitState& s, bool hold) {
    CircuitState out = s;
    out.hold_warning = false;
    if (hold && !s.mcu_connected) {
        out.hold_warning = true; // hold asserted while disconnected: no-op
        return out;
    }
    out.hold = hold;
    return out;
}

void HarvestFrontEnd::validate() const {
    if (!(clamp_fraction > 0.0) || !(clamp_fraction < 1.0))
        throw std::invalid_argument("front-end clamp fraction must lie in (0, 1)");
    if (schottky_drop_v < 0.15 || schottky_drop_v > 0.45)
        throw std::invalid_argument("Schottky drop must lie in [0.15, 0.45] V");
    if (storage_voltage_v < 0.0 || !(storage_capacitance_f > 0.0))
        throw std::invalid_argument("front-end storage parameters invalid");
    if (!(mppt_tracking_tau_s > 0.0))
        throw std::invalid_argument("MPPT tracking tau must be > 0");
}

FrontEndOutput step_frontend(const HarvestFrontEnd& fe, FrontEndState& fs,
                             const SolarCellModel& cell, double lux_total,
                             double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("step_frontend: dt must be > 0");
    const double voc = solar_voc(cell, lux_total);
    const double r_sc = solar_series_resistance(cell, lux_total);
    FrontEndOutput out;
    switch (fe.kind) {
    case HarvestFrontEnd::Kind::PmicMppt: {
        // The boost converter's tracking loop is slow; the clamp follows a
        // smoothed Voc estimate, so wake-up pulses never reach the node.
        fs.v_track += (voc - fs.v_track) * (1.0 - std::exp(-dt / fe.mppt_tracking_tau_s));
        out.v_sc = fe.clamp_fraction * fs.v_track;
        const double i = std::max(0.0, (voc - out.v_sc) / r_sc);
        out.harvested_power_w = out.v_sc * i;
        break;
    }
    case HarvestFrontEnd::Kind::Schottky: {
        if (fs.v_storage <= 0.0)
            fs.v_storage = fe.storage_voltage_v;
        const double v_pin = fs.v_storage + fe.schottky_drop_v;
        if (voc > v_pin) {
            out.v_sc = v_pin;
            const double i = (voc - out.v_sc) / r_sc;
            out.harvested_power_w = fs.v_storage * i;
            // dE = P dt on an ideal capacitor storage.
            const double e_now =
                0.5 * fe.storage_capacitance_f * fs.v_storage * fs.v_storage;
            const double e_new = e_now + out.harvested_power_w * dt;
            fs.v_storage = std::sqrt(2.0 * e_new / fe.storage_capacitance_f);
        } else {
            out.v_sc = voc;
            out.harvested_power_w = 0.0;
        }
        break;
    }
    }
    return out;
}

} // namespace owu
