#include "core/devices.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owu {

namespace {
// Fritsch-Carlson slopes for a shape-preserving cubic through (x, y).
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n - 1), m(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    return m;
}
} // namespace

void LuxResistanceCurve::validate() const {
    if (points.size() < 2)
        throw std::invalid_argument("resistance curve needs >= 2 control points");
    double prev = -1.0;
    for (const auto& [lux, r] : points) {
        if (lux <= prev)
            throw std::invalid_argument("resistance curve lux values must ascend");
        if (!(r > 0.0))
            throw std::invalid_argument("resistance curve values must be > 0");
        prev = lux;
    }
}

double LuxResistanceCurve::at(double lux) const {
    const std::size_t n = points.size();
    if (n == 1)
        return points[0].second;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::log1p(points[i].first);
        y[i] = std::log(points[i].second);
    }
    const double q = std::log1p(std::max(lux, 0.0));
    if (q <= x.front())
        return points.front().second;
    if (q >= x.back())
        return points.back().second;
    const auto m = pchip_slopes(x, y);
    std::size_t i = 0;
    while (i + 2 < n && q >= x[i + 1])
        ++i;
    const double h = x[i + 1] - x[i];
    const double t = (q - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double val = (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * m[i] +
                       (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h * m[i + 1];
    return std::exp(val);
}

void SolarCellModel::validate() const {
    if (!(area_mm2 > 0.0))
        throw std::invalid_argument("solar cell area must be > 0");
    if (!(voc_coeff_b > 0.0) || !(knee_coeff_b >= 0.0))
        throw std::invalid_argument("solar Voc slope coefficients must be positive");
    if (!(knee_lux > 1.0))
        throw std::invalid_argument("solar Voc knee must be above 1 lx");
    if (!(response_time_ref_s > 0.0) || !(response_area_ref_mm2 > 0.0))
        throw std::invalid_argument("solar response reference pair must be positive");
    if (!(flash_lux_per_w_m2 > 0.0))
        throw std::invalid_argument("flash coupling must be > 0");
    series_resistance.validate();
}

SolarCellModel default_wakeup_cell() {
    SolarCellModel m;
    m.area_mm2 = 80.0;
    m.series_resistance.points = {
        {0.0, 150e3},  {400.0, 110e3},  {800.0, 70e3},
        {1600.0, 36.5e3}, {2000.0, 180e3}, {5000.0, 240e3},
    };
    return m;
}

SolarCellModel default_harvest_cell() {
    SolarCellModel m = default_wakeup_cell();
    m.area_mm2 = 250.0; // AM-1456, 25 mm x 10 mm
    const double scale = 80.0 / 250.0; // larger junction, lower resistance
    for (auto& [lux, r] : m.series_resistance.points)
        r *= scale;
    return m;
}

double solar_voc(const SolarCellModel& m, double lux) {
    if (lux < 0.0)
        throw std::invalid_argument("lux must be >= 0");
    double raw;
    if (lux < 1.0) {
        raw = m.voc_coeff_a * lux; // linear from (0 lx, 0 V) to (1 lx, a)
    } else if (lux <= m.knee_lux) {
        raw = m.voc_coeff_a + m.voc_coeff_b * std::log(lux);
    } else {
        raw = m.voc_coeff_a + m.voc_coeff_b * std::log(m.knee_lux) +
              m.knee_coeff_b * std::log(lux / m.knee_lux);
    }
    return std::max(0.0, raw);
}

double solar_response_time(const SolarCellModel& m) {
    return m.response_time_ref_s * m.area_mm2 / m.response_area_ref_mm2;
}

double solar_series_resistance(const SolarCellModel& m, double lux) {
    return m.series_resistance.at(lux);
}

void PhototransistorModel::validate() const {
    if (!(sensitive_area_mm2 > 0.0) || !(responsivity_a_per_w_m2 > 0.0))
        throw std::invalid_argument("phototransistor area/responsivity must be > 0");
    if (!(response_time_on_s > 0.0) || !(response_time_off_s > 0.0))
        throw std::invalid_argument("phototransistor response times must be > 0");
    if (!(coating_attenuation > 0.0) || coating_attenuation > 1.0)
        throw std::invalid_argument("coating attenuation must lie in (0, 1]");
    if (!(ambient_efficacy_lm_per_w > 0.0))
        throw std::invalid_argument("ambient efficacy must be > 0");
}

double pt_collector_current(const PhototransistorModel& m, double irradiance_w_m2,
                            double ambient_lux) {
    if (irradiance_w_m2 < 0.0 || ambient_lux < 0.0)
        throw std::invalid_argument("phototransistor inputs must be >= 0");
    const double ambient_equiv = ambient_lux / m.ambient_efficacy_lm_per_w;
    return m.responsivity_a_per_w_m2 * m.coating_attenuation *
           (irradiance_w_m2 + ambient_equiv);
}

double pt_response_time(const PhototransistorModel& m, double target_current_a,
                        bool turning_on) {
    const double base = turning_on ? m.response_time_on_s : m.response_time_off_s;
    if (target_current_a <= 0.0)
        return m.response_time_max_s;
    // Switching speed degrades at low collector currents.
    const double tau = base * m.response_ref_current_a / target_current_a;
    return std::clamp(tau, base, m.response_time_max_s);
}

void LdrModel::validate() const {
    if (!(r0_ohm > 0.0) || !(gamma > 0.0) || !(dark_resistance_ohm > 0.0))
        throw std::invalid_argument("LDR curve parameters must be > 0");
    if (!(tau_fall_s > 0.0) || !(tau_rise_s > 0.0))
        throw std::invalid_argument("LDR time constants must be > 0");
    if (!(tau_fall_s < tau_rise_s))
        throw std::invalid_argument("LDR must brighten faster than it darkens");
    if (!(coating_attenuation > 0.0) || coating_attenuation > 1.0)
        throw std::invalid_argument("coating attenuation must lie in (0, 1]");
}

double LdrModel::steady_resistance(double lux) const {
    const double eff = lux * coating_attenuation;
    if (eff <= 0.0)
        return dark_resistance_ohm;
    return std::min(dark_resistance_ohm, r0_ohm * std::pow(eff, -gamma));
}

double ldr_resistance_step(const LdrModel& m, double r_now, double lux, double dt) {
    if (!(r_now > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("LDR step needs r_now > 0 and dt > 0");
    const double target = m.steady_resistance(lux);
    const double tau = target < r_now ? m.tau_fall_s : m.tau_rise_s;
    return target + (r_now - target) * std::exp(-dt / tau);
}

void MosfetParams::validate() const {
    if (polarity == Polarity::N && !(vgs_threshold_v > 0.0))
        throw std::invalid_argument("N-channel threshold must be > 0");
    if (polarity == Polarity::P && !(vgs_threshold_v < 0.0))
        throw std::invalid_argument("P-channel threshold must be < 0");
    if (!(subthreshold_swing_v > 0.0))
        throw std::invalid_argument("subthreshold swing must be > 0");
    if (!(off_current_floor_a >= 0.0) || !(on_resistance_ohm > 0.0) ||
        !(threshold_current_a > 0.0))
        throw std::invalid_argument("MOSFET current parameters must be positive");
}

double mosfet_current(const MosfetParams& p, double vgs, double vds) {
    const double overdrive = p.polarity == MosfetParams::Polarity::N
                                 ? vgs - p.vgs_threshold_v
                                 : p.vgs_threshold_v - vgs;
    const double av = std::abs(vds);
    if (av == 0.0)
        return 0.0;
    const double sign = vds > 0.0 ? 1.0 : -1.0;
    // Linear taper through the origin; saturates above ~100 mV of vds.
    const double taper = 1.0 - std::exp(-av / 0.026);
    const double i_exp =
        p.threshold_current_a * std::pow(10.0, overdrive / p.subthreshold_swing_v);
    const double i_ohm = av / p.on_resistance_ohm;
    double mag = std::min(i_ohm, i_exp * taper);
    mag = std::max(mag, p.off_current_floor_a * taper);
    return sign * mag;
}

} // namespace owu
