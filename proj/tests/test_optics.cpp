#include <doctest.h>

#include "core/optics.hpp"

#include <cmath>

using namespace owu;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Quadrature oracle: total radiant flux of the generalized Lambertian
// pattern over the emission hemisphere, which must recover P exactly.
double hemisphere_flux(double p_watts, double m, int steps = 20001) {
    // Integrand in theta: (m+1)P/(2pi) * cos^m(theta) * 2pi sin(theta).
    auto f = [&](double th) {
        return (m + 1.0) * p_watts * std::pow(std::cos(th), m) * std::sin(th);
    };
    const double h = (kPi / 2.0) / (steps - 1);
    double acc = 0.0; // Simpson
    for (int i = 0; i < steps - 2; i += 2) {
        const double a = i * h;
        acc += h / 3.0 * (f(a) + 4.0 * f(a + h) + f(a + 2.0 * h));
    }
    return acc;
}
} // namespace

TEST_CASE("lambertian order") {
    CHECK(lambertian_order(120.0) == doctest::Approx(1.0).epsilon(1e-12));

    // Oracle: direct evaluation of -ln2 / ln(cos 30 deg).
    const double oracle60 = -std::log(2.0) / std::log(std::cos(kPi / 6.0));
    CHECK(lambertian_order(60.0) == doctest::Approx(oracle60).epsilon(1e-12));
    CHECK(lambertian_order(60.0) == doctest::Approx(4.81884).epsilon(1e-4));

    // Near the wide-angle limit the order collapses toward zero but stays
    // positive; 179.9 deg evaluates to ~0.0984.
    const double m_wide = lambertian_order(179.9);
    CHECK(m_wide > 0.0);
    CHECK(m_wide == doctest::Approx(0.09840).epsilon(1e-3));

    CHECK_THROWS_AS(lambertian_order(0.0), std::domain_error);
    CHECK_THROWS_AS(lambertian_order(180.0), std::domain_error);
    CHECK_THROWS_AS(lambertian_order(-5.0), std::domain_error);
}

TEST_CASE("irradiance of the bench transmitter") {
    OpticalSource src; // 20 mW, 120 deg
    LinkGeometry geom;
    geom.distance_m = 0.25;

    // Oracle: (m+1)P/(2 pi d^2) with m = 1.
    const double oracle = 2.0 * 0.020 / (2.0 * kPi * 0.25 * 0.25);
    CHECK(irradiance(src, geom) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(irradiance(src, geom) == doctest::Approx(0.101859).epsilon(1e-4));

    SUBCASE("cosine null at 90 degrees emission") {
        geom.emission_angle_deg = 90.0;
        CHECK(irradiance(src, geom) == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("inverse square law") {
        LinkGeometry far = geom;
        far.distance_m = 0.5;
        CHECK(irradiance(src, geom) / irradiance(src, far) ==
              doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("hemisphere integral recovers the radiant flux") {
    for (double m : {1.0, 2.0, 5.0, 20.0}) {
        const double flux = hemisphere_flux(0.020, m);
        CHECK(std::abs(flux - 0.020) / 0.020 < 1e-6);
    }
}

TEST_CASE("irradiance monotonicity") {
    OpticalSource src;
    double prev = 1e9;
    for (double d = 0.05; d <= 1.0; d += 0.05) {
        LinkGeometry g;
        g.distance_m = d;
        const double e = irradiance(src, g);
        CHECK(e < prev);
        prev = e;
    }
    LinkGeometry g;
    g.distance_m = 0.25;
    double prev_e = 1e9, prev_i = 1e9;
    for (double a = 0.0; a <= 90.0; a += 5.0) {
        LinkGeometry ge = g, gi = g;
        ge.emission_angle_deg = a;
        gi.incidence_angle_deg = a;
        CHECK(irradiance(src, ge) <= prev_e);
        CHECK(irradiance(src, gi) <= prev_i);
        prev_e = irradiance(src, ge);
        prev_i = irradiance(src, gi);
    }
}

TEST_CASE("illuminance conversion") {
    CHECK(illuminance_from_irradiance(0.101859, 300.0) ==
          doctest::Approx(30.5577).epsilon(1e-3));
    CHECK(illuminance_from_irradiance(0.0, 300.0) == 0.0);
    CHECK(illuminance_from_irradiance(1.0, 1.0) == 1.0);
    CHECK_THROWS(illuminance_from_irradiance(-1.0, 300.0));
    CHECK_THROWS(illuminance_from_irradiance(1.0, 0.0));
}

TEST_CASE("ambient profiles") {
    SUBCASE("constant") {
        auto p = AmbientProfile::constant(400.0);
        CHECK(p.at(0.0) == 400.0);
        CHECK(p.at(123.0) == 400.0);
    }
    SUBCASE("midpoint of a ramp") {
        AmbientProfile p;
        p.segments.push_back({0.0, AmbientProfile::Kind::LinearRamp, 0.0, 1600.0});
        p.segments.push_back({10.0, AmbientProfile::Kind::Constant, 1600.0, 0.0});
        p.validate();
        CHECK(p.at(5.0) == doctest::Approx(800.0));
        CHECK(p.at(10.0) == 1600.0);
        CHECK(p.at(50.0) == 1600.0);
    }
    SUBCASE("step boundary convention") {
        AmbientProfile p;
        p.segments.push_back({0.0, AmbientProfile::Kind::Constant, 400.0, 0.0});
        p.segments.push_back({1.0, AmbientProfile::Kind::Step, 2000.0, 0.0});
        p.validate();
        CHECK(p.at(0.999) == 400.0);
        CHECK(p.at(1.0) == 2000.0);
    }
    SUBCASE("query before first segment") {
        AmbientProfile p;
        p.segments.push_back({5.0, AmbientProfile::Kind::Constant, 700.0, 0.0});
        CHECK(p.at(0.0) == 700.0);
    }
    SUBCASE("profiles never go negative") {
        AmbientProfile p;
        p.segments.push_back({0.0, AmbientProfile::Kind::LinearRamp, 0.0, 1600.0});
        p.segments.push_back({10.0, AmbientProfile::Kind::Step, 0.0, 0.0});
        p.validate();
        for (double t = 0.0; t < 20.0; t += 0.1)
            CHECK(p.at(t) >= 0.0);
    }
    SUBCASE("invalid profiles are rejected") {
        AmbientProfile p;
        p.segments.push_back({0.0, AmbientProfile::Kind::Constant, -1.0, 0.0});
        CHECK_THROWS(p.validate());
        AmbientProfile q;
        q.segments.push_back({1.0, AmbientProfile::Kind::Constant, 1.0, 0.0});
        q.segments.push_back({1.0, AmbientProfile::Kind::Constant, 2.0, 0.0});
        CHECK_THROWS(q.validate());
    }
}

TEST_CASE("pulse envelope") {
    PulseShape p;
    p.duration_s = 0.05;
    CHECK(p.envelope(-0.001) == 0.0);
    CHECK(p.envelope(0.01) == 1.0);
    CHECK(p.envelope(0.051) == 0.0);

    PulseShape trap;
    trap.duration_s = 0.05;
    trap.rise_s = 0.01;
    trap.fall_s = 0.01;
    trap.validate();
    CHECK(trap.envelope(0.005) == doctest::Approx(0.5));
    CHECK(trap.envelope(0.02) == 1.0);
    CHECK(trap.envelope(0.045) == doctest::Approx(0.5));

    PulseShape bad;
    bad.duration_s = 0.01;
    bad.rise_s = 0.02;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("positioned link budget") {
    OpticalSource src;
    src.position[0] = 0.0;
    double rx[3] = {0.25, 0.0, 0.0};
    double nrm[3] = {-1.0, 0.0, 0.0};
    LinkGeometry g;
    g.distance_m = 0.25;
    CHECK(irradiance_between(src, rx, nrm) ==
          doctest::Approx(irradiance(src, g)).epsilon(1e-12));

    // Facing away: no coupling.
    double nrm_away[3] = {1.0, 0.0, 0.0};
    CHECK(irradiance_between(src, rx, nrm_away) == 0.0);
}
