#include "core/experiments.hpp"

#include "core/csvio.hpp"
#include "core/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace owu {

namespace {

std::uint64_t cell_seed(std::uint64_t base, double lux, double dist) {
    return mix_seed(base, std::bit_cast<std::uint64_t>(lux),
                    std::bit_cast<std::uint64_t>(dist));
}

double flash_irradiance(const Parameters& p, double distance_m) {
    LinkGeometry g;
    g.distance_m = distance_m;
    return irradiance(p.transmitter, g);
}

// Fraction of the detection window simulated at fine resolution. The drive
// only decays once the flash ends, so a short tail after the pulse decides
// the whole period.
double window_length(const Parameters& p) {
    return 0.05 + p.transmitter.pulse.duration_s + 0.30;
}

struct PulseSim {
    const Parameters& p;
    double ambient_lux;
    double irr_peak;

    // Runs one pulse window for the selected design from the settled state.
    // Returns true when the MCU connects; fills latency with the delay from
    // flash onset to connection.
    bool run(int design, const CircuitState& steady, std::uint64_t seed,
             bool with_noise, double* latency_s = nullptr,
             std::vector<RaceTracePoint>* trace = nullptr) const {
        const double t_flash = 0.05;
        const double t_end = window_length(p);
        const bool noisy = with_noise && !p.noise.is_zero();

        FlickerProcess flicker(p.noise, mix_seed(seed, 0xf11c));
        std::mt19937_64 jit_rng(mix_seed(seed, 0x11a5));
        std::normal_distribution<double> gauss(0.0, 1.0);
        double amp = 1.0;
        if (noisy && p.noise.amplitude_jitter_frac > 0.0)
            amp = std::max(0.0, 1.0 + p.noise.amplitude_jitter_frac * gauss(jit_rng));

        CircuitState s = steady;
        s.t = 0.0;
        const double dt = design == 1 ? recommended_dt_design1(p.design1)
                                      : recommended_dt_design2(p.design2);
        bool fired = false;
        double next_sample = 0.0;
        for (double t = 0.0; t < t_end; t += dt) {
            double lux = ambient_lux;
            if (noisy && p.noise.ambient_flicker_sd_frac > 0.0)
                lux = std::max(0.0, lux * (1.0 + p.noise.ambient_flicker_sd_frac *
                                                     flicker.step(dt)));
            const double env =
                p.transmitter.pulse.envelope(t - t_flash) * amp;
            const double irr = irr_peak * env;
            if (design == 1) {
                s = step_design1(p.design1, s, lux + p.flash_lux(irr), dt);
            } else {
                s = step_design2(p.design2, s, lux, irr, dt);
            }
            if (trace && t >= next_sample) {
                trace->push_back({t, s.pt_current, s.ldr_resistance, s.v_gate_nmos1});
                next_sample += 1e-3;
            }
            if (!fired && s.mcu_connected) {
                fired = true;
                if (latency_s)
                    *latency_s = s.t - t_flash;
                if (!trace)
                    break;
            }
        }
        return fired;
    }
};

CircuitState settled_or_throw(const Parameters& p, int design, double lux) {
    CircuitState s = design == 1 ? settle_design1(p.design1, lux)
                                 : settle_design2(p.design2, lux);
    if (s.mcu_connected)
        throw std::runtime_error(
            "initial state not settled: the receiver latches at the requested "
            "ambient level; extend the warm-up beyond 3 x t_amb or lower the "
            "ambient illuminance");
    return s;
}

} // namespace

std::string ErrorRateReport::to_csv() const {
    CsvWriter w({"lux", "distance_m", "transmitted", "detected", "errors"});
    for (const auto& c : cells)
        w.row({CsvWriter::num(c.lux), CsvWriter::num(c.distance_m),
               CsvWriter::num((std::int64_t)c.transmitted),
               CsvWriter::num((std::int64_t)c.detected),
               CsvWriter::num((std::int64_t)c.errors)});
    return w.text();
}

const ErrorRateCell* ErrorRateReport::find(double lux, double distance_m) const {
    for (const auto& c : cells)
        if (c.lux == lux && c.distance_m == distance_m)
            return &c;
    return nullptr;
}

TrialResult run_trials(const Parameters& p, const TrialConfig& cfg) {
    cfg.validate(p.transmitter.pulse.duration_s);
    // Warm-up: the ambient steady state already embodies >= 3 x t_amb of
    // settled exposure; reject ambients where no quiescent point exists.
    const CircuitState steady = settled_or_throw(p, cfg.design, cfg.ambient_lux);

    PulseSim sim{p, cfg.ambient_lux, flash_irradiance(p, cfg.distance_m)};
    TrialResult r;
    r.transmitted = cfg.pulses;
    for (int k = 0; k < cfg.pulses; ++k) {
        const std::uint64_t seed =
            mix_seed(cell_seed(cfg.rng_seed, cfg.ambient_lux, cfg.distance_m),
                     (std::uint64_t)k);
        if (sim.run(cfg.design, steady, seed, true))
            ++r.detected;
    }
    return r;
}

ErrorRateReport error_rate_grid(const Parameters& p,
                                const std::vector<double>& lux_list,
                                const std::vector<double>& distance_list,
                                const TrialConfig& cfg_base) {
    ErrorRateReport rep;
    rep.seed = cfg_base.rng_seed;
    for (double lux : lux_list) {
        for (double d : distance_list) {
            TrialConfig cfg = cfg_base;
            cfg.ambient_lux = lux;
            cfg.distance_m = d;
            const TrialResult r = run_trials(p, cfg);
            rep.cells.push_back({lux, d, r.transmitted, r.detected, r.errors()});
        }
    }
    return rep;
}

int ambient_immunity_trial(const Parameters& p, const AmbientProfile& profile,
                           double duration_s) {
    profile.validate();
    if (profile.max_lux() > 2000.0)
        throw std::invalid_argument("immunity profile must stay within 0-2000 lx");
    if (!(duration_s > 0.0))
        throw std::invalid_argument("immunity duration must be > 0");

    CircuitState s = settle_design1(p.design1, profile.at(0.0));
    int wakeups = 0;
    bool prev = s.mcu_connected;
    // Flash-free evolution is slow; a coarse quasi-static step suffices and
    // any abrupt profile step still lands within one step.
    const double dt_coarse = 2e-3;
    StepControl ctl;
    for (double t = 0.0; t < duration_s; t += dt_coarse) {
        s = step_design1(p.design1, s, profile.at(t), dt_coarse, ctl);
        if (s.mcu_connected && !prev)
            ++wakeups;
        prev = s.mcu_connected;
    }
    return wakeups;
}

std::string RaceResult::trace_csv() const {
    CsvWriter w({"t_s", "pt_current_a", "ldr_ohm", "v_gate_v"});
    for (const auto& pt : trace)
        w.row({CsvWriter::num(pt.t), CsvWriter::num(pt.pt_current_a),
               CsvWriter::num(pt.ldr_ohm), CsvWriter::num(pt.v_gate_v)});
    return w.text();
}

std::vector<RaceResult> race_condition_demo(const Parameters& p,
                                            const std::vector<double>& lux_list,
                                            int repeats) {
    std::vector<RaceResult> out;
    for (double lux : lux_list) {
        RaceResult r;
        r.lux = lux;
        r.repeats = repeats;
        const CircuitState steady = settled_or_throw(p, 2, lux);
        PulseSim sim{p, lux, flash_irradiance(p, p.race_distance_m)};
        for (int k = 0; k < repeats; ++k) {
            const std::uint64_t seed =
                mix_seed(cell_seed(p.trial.rng_seed, lux, p.race_distance_m),
                         (std::uint64_t)k);
            std::vector<RaceTracePoint>* trace = k == 0 ? &r.trace : nullptr;
            if (sim.run(2, steady, seed, true, nullptr, trace))
                ++r.detected;
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<StandbyRow> standby_sweep(const Parameters& p,
                                      const std::vector<double>& lux_list) {
    std::vector<StandbyRow> rows;
    for (double lux : lux_list) {
        const double i = standby_current_design1(p.design1, lux);
        rows.push_back({lux, i, i * p.design1.supply_voltage_v});
    }
    return rows;
}

std::string standby_csv(const std::vector<StandbyRow>& rows) {
    CsvWriter w({"lux", "current_a", "power_w"});
    for (const auto& r : rows)
        w.row({CsvWriter::num(r.lux), CsvWriter::num(r.current_a),
               CsvWriter::num(r.power_w)});
    return w.text();
}

HarvestConflictResult harvesting_conflict_demo(const Parameters& p,
                                               double ambient_lux,
                                               double distance_m) {
    HarvestConflictResult res;
    const double irr = flash_irradiance(p, distance_m);
    const SolarCellModel harvest_cell = default_harvest_cell();

    // Unloaded response: the Voc swing the flash would produce on the bare cell.
    const double voc_amb = solar_voc(harvest_cell, ambient_lux);
    const double voc_flash =
        solar_voc(harvest_cell, ambient_lux + p.flash_lux(irr));
    res.unloaded_response_v = voc_flash - voc_amb;

    // Front-end-loaded cell: run the flash against the charging front-end and
    // feed the clamped node into a wake-up sense chain.
    HarvestFrontEnd fe = p.frontend;
    fe.kind = HarvestFrontEnd::Kind::PmicMppt;
    FrontEndState fs;
    fs.v_track = voc_amb;

    Design1Netlist loaded = p.design1;
    loaded.solar = harvest_cell;
    CircuitState s = settle_design1(loaded, ambient_lux);

    const double dt = recommended_dt_design1(loaded);
    const double t_flash = 0.05;
    const double t_end = t_flash + p.transmitter.pulse.duration_s + 0.3;
    double v_min = 1e9, v_max = -1e9;
    StepControl ctl;
    for (double t = 0.0; t < t_end; t += dt) {
        const double env = p.transmitter.pulse.envelope(t - t_flash);
        const double lux = ambient_lux + p.flash_lux(irr * env);
        const FrontEndOutput fo = step_frontend(fe, fs, harvest_cell, lux, dt);
        ctl.forced_v_sc = fo.v_sc;
        s = step_design1(loaded, s, lux, dt, ctl);
        v_min = std::min(v_min, fo.v_sc);
        v_max = std::max(v_max, fo.v_sc);
        if (s.mcu_connected)
            res.loaded_detected = true;
    }
    res.loaded_deviation_v = v_max - v_min;

    // The dedicated wake-up cell sees the same flash unclamped.
    res.dedicated_detected =
        deterministic_detect_design1(p, ambient_lux, distance_m);
    return res;
}

bool deterministic_detect_design1(const Parameters& p, double ambient_lux,
                                  double distance_m, double* latency_s) {
    CircuitState steady = settle_design1(p.design1, ambient_lux);
    if (steady.mcu_connected)
        return true;
    PulseSim sim{p, ambient_lux, flash_irradiance(p, distance_m)};
    return sim.run(1, steady, 0, false, latency_s);
}

double detection_range_design1(const Parameters& p, double ambient_lux,
                               double d_lo, double d_hi) {
    if (!deterministic_detect_design1(p, ambient_lux, d_lo))
        return 0.0;
    if (deterministic_detect_design1(p, ambient_lux, d_hi))
        return d_hi;
    for (int i = 0; i < 24; ++i) {
        const double mid = 0.5 * (d_lo + d_hi);
        if (deterministic_detect_design1(p, ambient_lux, mid))
            d_lo = mid;
        else
            d_hi = mid;
    }
    return d_lo;
}

} // namespace owu
