#include <doctest.h>

#include "core/devices.hpp"

#include <cmath>

using namespace owu;

TEST_CASE("solar cell open-circuit voltage") {
    SolarCellModel m = default_wakeup_cell();

    // Paper anchors.
    CHECK(solar_voc(m, 400.0) == doctest::Approx(0.600).epsilon(1e-4));
    CHECK(solar_voc(m, 1600.0) == doctest::Approx(0.750).epsilon(1e-4));

    // Oracle: b = 0.15/ln 4, a = 0.6 - b ln 400, evaluated at 100 lx.
    const double b = 0.15 / std::log(4.0);
    const double a = 0.6 - b * std::log(400.0);
    CHECK(solar_voc(m, 100.0) ==
          doctest::Approx(a + b * std::log(100.0)).epsilon(1e-6));
    CHECK(solar_voc(m, 100.0) == doctest::Approx(0.450).epsilon(1e-4));

    SUBCASE("monotone, continuous, clamped at zero") {
        CHECK(solar_voc(m, 0.0) == 0.0);
        double prev = -1.0;
        for (double lux = 0.0; lux <= 4000.0; lux += 2.0) {
            const double v = solar_voc(m, lux);
            CHECK(v >= prev);
            CHECK(v >= 0.0);
            prev = v;
        }
        // No jump across the log-law knee.
        const double below = solar_voc(m, m.knee_lux - 1e-6);
        const double above = solar_voc(m, m.knee_lux + 1e-6);
        CHECK(std::abs(above - below) < 1e-6);
    }
}

TEST_CASE("solar response time scales with area") {
    SolarCellModel m = default_wakeup_cell();
    m.area_mm2 = 375.0;
    CHECK(solar_response_time(m) == doctest::Approx(1e-3).epsilon(1e-12));
    m.area_mm2 = 80.0;
    CHECK(solar_response_time(m) == doctest::Approx(1e-3 * 80.0 / 375.0));
    CHECK(solar_response_time(m) == doctest::Approx(0.2133e-3).epsilon(1e-3));
    m.area_mm2 = m.response_area_ref_mm2;
    CHECK(solar_response_time(m) == m.response_time_ref_s);
}

TEST_CASE("phototransistor collector current") {
    PhototransistorModel pt; // uncoated by default

    // Calibration anchor: 100 uA at 500 lx ambient, no flash.
    CHECK(pt_collector_current(pt, 0.0, 500.0) ==
          doctest::Approx(100e-6).epsilon(1e-9));
    CHECK(pt_collector_current(pt, 0.0, 0.0) == 0.0);

    PhototransistorModel coated = pt;
    coated.coating_attenuation = 0.1;
    CHECK(pt_collector_current(coated, 0.0, 500.0) ==
          doctest::Approx(10e-6).epsilon(1e-9));

    SUBCASE("linear in irradiance at fixed ambient") {
        const double base = pt_collector_current(pt, 0.0, 300.0);
        const double one = pt_collector_current(pt, 1.0, 300.0);
        const double two = pt_collector_current(pt, 2.0, 300.0);
        CHECK(two - base == doctest::Approx(2.0 * (one - base)).epsilon(1e-12));
    }
    SUBCASE("speed degrades at low current") {
        const double fast = pt_response_time(pt, 100e-6, true);
        const double slow = pt_response_time(pt, 1e-6, true);
        CHECK(fast == doctest::Approx(pt.response_time_on_s));
        CHECK(slow > fast);
        CHECK(pt_response_time(pt, 0.0, true) == pt.response_time_max_s);
    }
}

TEST_CASE("LDR relaxation") {
    LdrModel ldr;

    SUBCASE("paper resistance span, uncoated") {
        CHECK(ldr.steady_resistance(100.0) == doctest::Approx(10e3).epsilon(0.01));
        CHECK(ldr.steady_resistance(1600.0) == doctest::Approx(0.5e3).epsilon(0.01));
    }
    SUBCASE("fixed point") {
        const double r = ldr.steady_resistance(400.0);
        CHECK(ldr_resistance_step(ldr, r, 400.0, 0.01) == doctest::Approx(r));
    }
    SUBCASE("five time constants settle within 1% of the step") {
        const double target = 0.5e3;
        // Pick the lux that lands on the target.
        const double lux = 1600.0;
        const double r0 = 10e3;
        double r = ldr_resistance_step(ldr, r0, lux, 5.0 * ldr.tau_fall_s);
        CHECK(std::abs(r - target) / (r0 - target) < 0.01);
    }
    SUBCASE("darkening is two orders slower than brightening") {
        CHECK(ldr.tau_rise_s / ldr.tau_fall_s >= 100.0);
        // Settling times to 99% scale with the constants.
        const double t_bright = 5.0 * ldr.tau_fall_s;
        const double t_dark = 5.0 * ldr.tau_rise_s;
        CHECK(t_dark / t_bright >= 100.0);
    }
    SUBCASE("monotone convergence, never crossing the target") {
        double r = 10e3;
        const double target = ldr.steady_resistance(1600.0);
        double prev_gap = r - target;
        for (int i = 0; i < 200; ++i) {
            r = ldr_resistance_step(ldr, r, 1600.0, 1e-3);
            const double gap = r - target;
            CHECK(gap >= 0.0);
            CHECK(gap <= prev_gap);
            prev_gap = gap;
        }
    }
    SUBCASE("coating raises the effective resistance") {
        LdrModel coated = ldr;
        coated.coating_attenuation = 0.02;
        CHECK(coated.steady_resistance(400.0) > 50e3); // hundreds of kohm
        CHECK(coated.steady_resistance(400.0) < coated.dark_resistance_ohm);
    }
}

TEST_CASE("mosfet three-region current") {
    MosfetParams n;
    n.polarity = MosfetParams::Polarity::N;
    n.vgs_threshold_v = 0.6;
    n.subthreshold_swing_v = 0.09;
    n.off_current_floor_a = 10e-12;
    n.threshold_current_a = 2e-6;

    SUBCASE("deep off sits at the floor") {
        CHECK(mosfet_current(n, 0.0, 1.0) ==
              doctest::Approx(10e-12).epsilon(1e-6));
        CHECK(mosfet_current(n, 0.0, 0.0) == 0.0);
    }
    SUBCASE("one decade per swing volts") {
        const double i1 = mosfet_current(n, 0.30, 1.0);
        const double i2 = mosfet_current(n, 0.30 + n.subthreshold_swing_v, 1.0);
        CHECK(i2 / i1 == doctest::Approx(10.0).epsilon(1e-9));
    }
    SUBCASE("continuous at the subthreshold/ohmic crossover") {
        // Find the crossover gate voltage at vds = 0.5 V, then compare the
        // two branch formulas there.
        const double vds = 0.5;
        const double taper = 1.0 - std::exp(-vds / 0.026);
        const double i_ohm = vds / n.on_resistance_ohm;
        const double od = n.subthreshold_swing_v *
                          std::log10(i_ohm / (n.threshold_current_a * taper));
        const double i_exp = n.threshold_current_a *
                             std::pow(10.0, od / n.subthreshold_swing_v) * taper;
        CHECK(std::abs(i_exp - i_ohm) / i_ohm < 0.01);
        // And the full model is continuous around that point.
        const double vgs_star = n.vgs_threshold_v + od;
        const double lo = mosfet_current(n, vgs_star - 1e-6, vds);
        const double hi = mosfet_current(n, vgs_star + 1e-6, vds);
        CHECK(std::abs(hi - lo) / hi < 1e-3);
    }
    SUBCASE("monotone in overdrive") {
        double prev = 0.0;
        for (double vgs = -0.5; vgs <= 2.0; vgs += 0.01) {
            const double i = mosfet_current(n, vgs, 1.0);
            CHECK(i >= prev);
            prev = i;
        }
    }
    SUBCASE("p-channel mirrors the behaviour") {
        MosfetParams p = n;
        p.polarity = MosfetParams::Polarity::P;
        p.vgs_threshold_v = -0.45;
        // Fully on: ohmic conduction with negative vds.
        const double i_on = mosfet_current(p, -2.8, -0.1);
        CHECK(i_on == doctest::Approx(-0.1 / p.on_resistance_ohm).epsilon(1e-6));
        // Off at vgs = 0.
        CHECK(std::abs(mosfet_current(p, 0.0, -1.0)) <=
              doctest::Approx(10e-12).epsilon(1e-6));
    }
}

TEST_CASE("lux-resistance curve interpolation") {
    LuxResistanceCurve c;
    c.points = {{0.0, 200e3}, {400.0, 100e3}, {1600.0, 20e3}};
    c.validate();
    CHECK(c.at(0.0) == doctest::Approx(200e3));
    CHECK(c.at(400.0) == doctest::Approx(100e3));
    CHECK(c.at(1600.0) == doctest::Approx(20e3));
    CHECK(c.at(5000.0) == doctest::Approx(20e3)); // clamps beyond the table
    // Shape-preserving between monotone control points.
    double prev = c.at(0.0);
    for (double lux = 10.0; lux <= 1600.0; lux += 10.0) {
        CHECK(c.at(lux) <= prev + 1e-9);
        prev = c.at(lux);
    }
    LuxResistanceCurve bad;
    bad.points = {{0.0, 1.0}};
    CHECK_THROWS(bad.validate());
}
