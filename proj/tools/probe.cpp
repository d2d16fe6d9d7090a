// Scratch probe for inspecting the Design-1 operating points while tuning
// the default parameter set. Not part of the shipped CLI.
#include "core/circuit.hpp"
#include "core/optics.hpp"

#include <cstdio>

using namespace owu;

static void print_point(const Design1Netlist& n, double lux) {
    CircuitState s = settle_design1(n, lux);
    std::printf("lux %7.1f  v_sc %.6f  v_b1 %.6f  |vgs_p1| %.6f  v_g1 %.6f  "
                "v_d1 %.6f  v_mcu %.6f  I %.4g  conn %d\n",
                lux, s.v_sc, s.v_b1, s.v_sc - s.v_b1, s.v_gate_nmos1,
                s.v_drain_nmos1, s.v_mcu, s.supply_current, (int)s.mcu_connected);
}

// Simulate one rectangular flash from settled ambient; report whether the
// MCU connects and the peak drive reached.
static bool flash_detect(const Design1Netlist& n, double lux_amb, double dist_m,
                         double pulse_s = 0.05, bool verbose = false) {
    OpticalSource src;
    LinkGeometry g;
    g.distance_m = dist_m;
    const double irr = irradiance(src, g);
    const double flash_lux = irr * n.solar.flash_lux_per_w_m2;

    CircuitState s = settle_design1(n, lux_amb);
    const double dt = recommended_dt_design1(n);
    bool fired = false;
    double peak_drive = 0.0, peak_vg1 = 0.0;
    for (double t = 0.0; t < pulse_s + 0.25; t += dt) {
        const double lux = lux_amb + (t < pulse_s ? flash_lux : 0.0);
        s = step_design1(n, s, lux, dt);
        peak_drive = std::max(peak_drive, s.v_sc - s.v_b1);
        peak_vg1 = std::max(peak_vg1, s.v_gate_nmos1);
        if (s.mcu_connected)
            fired = true;
    }
    if (verbose)
        std::printf("  amb %6.0f lx  d %.2f m  flash %8.1f lx  peak|vgs| %.4f  "
                    "peak vg1 %.4f  -> %s\n",
                    lux_amb, dist_m, flash_lux, peak_drive, peak_vg1,
                    fired ? "FIRE" : "miss");
    return fired;
}

int main() {
    Design1Netlist n = default_design1();

    std::printf("== static operating points ==\n");
    for (double lux : {0.0, 100.0, 400.0, 800.0, 1200.0, 1400.0, 1500.0, 1600.0,
                       1800.0, 2000.0})
        print_point(n, lux);

    std::printf("\n== standby targets: 0 lx -> 88.5 pA, 1600 lx -> 224 nA ==\n");
    std::printf("standby(0)    = %.4g A\n", standby_current_design1(n, 0.0));
    std::printf("standby(400)  = %.4g A\n", standby_current_design1(n, 400.0));
    std::printf("standby(800)  = %.4g A\n", standby_current_design1(n, 800.0));
    std::printf("standby(1600) = %.4g A\n", standby_current_design1(n, 1600.0));

    std::printf("\n== flash detection matrix ==\n");
    flash_detect(n, 0.0, 0.30, 0.05, true);
    flash_detect(n, 400.0, 0.25, 0.05, true);
    flash_detect(n, 400.0, 0.50, 0.05, true);
    flash_detect(n, 800.0, 0.25, 0.05, true);
    flash_detect(n, 1600.0, 0.25, 0.05, true);
    flash_detect(n, 2000.0, 0.05, 0.05, true);
    flash_detect(n, 2000.0, 0.20, 0.05, true);
    return 0;
}
