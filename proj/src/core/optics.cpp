#include "core/optics.hpp"

#include <algorithm>
#include <cmath>

namespace owu {

namespace {
constexpr double kPi = 3.14159265358979323846;
double deg2rad(double d) { return d * kPi / 180.0; }
} // namespace

void PulseShape::validate() const {
    if (!(duration_s > 0.0))
        throw std::invalid_argument("pulse duration must be > 0");
    if (rise_s < 0.0 || fall_s < 0.0 || rise_s + fall_s > duration_s)
        throw std::invalid_argument("pulse rise+fall must fit inside duration");
}

double PulseShape::envelope(double t) const {
    if (t < 0.0 || t >= duration_s)
        return 0.0;
    if (rise_s > 0.0 && t < rise_s)
        return t / rise_s;
    if (fall_s > 0.0 && t > duration_s - fall_s)
        return (duration_s - t) / fall_s;
    return 1.0;
}

void OpticalSource::validate() const {
    if (!(optical_power_w > 0.0))
        throw std::invalid_argument("optical power must be > 0");
    if (!(viewing_angle_deg > 0.0) || !(viewing_angle_deg < 180.0))
        throw std::invalid_argument("viewing angle must lie in (0, 180) degrees");
    pulse.validate();
}

void LinkGeometry::validate() const {
    if (!(distance_m > 0.0))
        throw std::invalid_argument("link distance must be > 0");
    if (emission_angle_deg < 0.0 || emission_angle_deg > 90.0 ||
        incidence_angle_deg < 0.0 || incidence_angle_deg > 90.0)
        throw std::invalid_argument("link angles must lie in [0, 90] degrees");
}

AmbientProfile AmbientProfile::constant(double lux) {
    AmbientProfile p;
    p.segments.push_back({0.0, Kind::Constant, lux, 0.0});
    return p;
}

void AmbientProfile::validate() const {
    if (segments.empty())
        throw std::invalid_argument("ambient profile needs at least one segment");
    double prev = -1.0;
    for (const auto& s : segments) {
        if (s.start_s <= prev)
            throw std::invalid_argument("ambient segments must be strictly time-ordered");
        prev = s.start_s;
        if (s.lux_a < 0.0 || (s.kind == Kind::LinearRamp && s.lux_b < 0.0))
            throw std::invalid_argument("ambient lux must be >= 0");
    }
}

double AmbientProfile::at(double t) const {
    if (segments.empty())
        return 0.0;
    // Before the first segment: its start value applies.
    if (t < segments.front().start_s)
        t = segments.front().start_s;
    std::size_t i = 0;
    while (i + 1 < segments.size() && t >= segments[i + 1].start_s)
        ++i;
    const Segment& s = segments[i];
    switch (s.kind) {
    case Kind::Constant:
    case Kind::Step:
        return s.lux_a;
    case Kind::LinearRamp: {
        const double end = (i + 1 < segments.size())
                               ? segments[i + 1].start_s
                               : s.start_s;
        if (end <= s.start_s)
            return s.lux_b; // ramp with no following segment: hold the end value
        const double u = std::clamp((t - s.start_s) / (end - s.start_s), 0.0, 1.0);
        return s.lux_a + u * (s.lux_b - s.lux_a);
    }
    }
    return 0.0;
}

double AmbientProfile::max_lux() const {
    double m = 0.0;
    for (const auto& s : segments)
        m = std::max({m, s.lux_a, s.kind == Kind::LinearRamp ? s.lux_b : 0.0});
    return m;
}

double lambertian_order(double viewing_angle_deg) {
    if (!(viewing_angle_deg > 0.0) || !(viewing_angle_deg < 180.0))
        throw std::domain_error("viewing angle must lie in (0, 180) degrees");
    const double half = deg2rad(viewing_angle_deg / 2.0);
    return -std::log(2.0) / std::log(std::cos(half));
}

double irradiance(const OpticalSource& src, const LinkGeometry& geom) {
    src.validate();
    geom.validate();
    const double m = lambertian_order(src.viewing_angle_deg);
    const double d = geom.distance_m;
    const double ce = std::cos(deg2rad(geom.emission_angle_deg));
    const double ci = std::cos(deg2rad(geom.incidence_angle_deg));
    return (m + 1.0) * src.optical_power_w / (2.0 * kPi * d * d) *
           std::pow(std::max(ce, 0.0), m) * std::max(ci, 0.0);
}

double illuminance_from_irradiance(double e_w_per_m2, double efficacy_lm_per_w) {
    if (e_w_per_m2 < 0.0)
        throw std::invalid_argument("irradiance must be >= 0");
    if (!(efficacy_lm_per_w > 0.0))
        throw std::invalid_argument("efficacy must be > 0");
    return e_w_per_m2 * efficacy_lm_per_w;
}

double irradiance_between(const OpticalSource& src, const double rx_pos[3],
                          const double rx_normal[3]) {
    double dvec[3];
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        dvec[i] = rx_pos[i] - src.position[i];
        d2 += dvec[i] * dvec[i];
    }
    const double d = std::sqrt(d2);
    if (!(d > 0.0))
        throw std::invalid_argument("transmitter and receiver positions coincide");

    auto norm = [](const double v[3]) {
        return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    };
    const double no = norm(src.orientation);
    const double nn = norm(rx_normal);

    double cos_e = 0.0, cos_i = 0.0;
    for (int i = 0; i < 3; ++i) {
        cos_e += dvec[i] / d * (no > 0.0 ? src.orientation[i] / no : 0.0);
        cos_i += -dvec[i] / d * (nn > 0.0 ? rx_normal[i] / nn : 0.0);
    }
    cos_e = std::clamp(cos_e, -1.0, 1.0);
    cos_i = std::clamp(cos_i, -1.0, 1.0);
    if (cos_e <= 0.0 || cos_i <= 0.0)
        return 0.0;

    const double m = lambertian_order(src.viewing_angle_deg);
    return (m + 1.0) * src.optical_power_w / (2.0 * kPi * d * d) *
           std::pow(cos_e, m) * cos_i;
}

} // namespace owu
