#pragma once

#include "core/config.hpp"
#include "core/params.hpp"

#include <string>
#include <vector>

namespace owu {

struct TrialResult {
    int transmitted = 0;
    int detected = 0;
    int errors() const { return transmitted - detected; }
};

struct ErrorRateCell {
    double lux = 0.0;
    double distance_m = 0.0;
    int transmitted = 0;
    int detected = 0;
    int errors = 0;
};

struct ErrorRateReport {
    std::vector<ErrorRateCell> cells;
    std::uint64_t seed = 0;
    std::string calibration_id;

    std::string to_csv() const; // lux,distance_m,transmitted,detected,errors
    const ErrorRateCell* find(double lux, double distance_m) const;
};

// One measurement campaign cell: pulses at the configured cadence from a
// settled ambient state; a pulse counts as detected when the MCU rail
// connects within one pulse period of emission.
TrialResult run_trials(const Parameters& p, const TrialConfig& cfg);

ErrorRateReport error_rate_grid(const Parameters& p,
                                const std::vector<double>& lux_list,
                                const std::vector<double>& distance_list,
                                const TrialConfig& cfg_base);

// Counts spurious MCU connections under a flash-free ambient profile.
int ambient_immunity_trial(const Parameters& p, const AmbientProfile& profile,
                           double duration_s);

struct RaceTracePoint {
    double t = 0.0;
    double pt_current_a = 0.0;
    double ldr_ohm = 0.0;
    double v_gate_v = 0.0;
};

struct RaceResult {
    double lux = 0.0;
    int repeats = 0;
    int detected = 0;
    std::vector<RaceTracePoint> trace; // first seeded repeat, 1 kHz sampling

    std::string trace_csv() const;
};

// Design-2 phototransistor/LDR timing conflict at the reference distance.
std::vector<RaceResult> race_condition_demo(const Parameters& p,
                                            const std::vector<double>& lux_list,
                                            int repeats);

struct StandbyRow {
    double lux = 0.0;
    double current_a = 0.0;
    double power_w = 0.0;
};

std::vector<StandbyRow> standby_sweep(const Parameters& p,
                                      const std::vector<double>& lux_list);
std::string standby_csv(const std::vector<StandbyRow>& rows);

// Fig. 4 demonstration: a front-end-loaded cell sees (almost) none of the
// flash, while the dedicated wake-up cell detects it.
struct HarvestConflictResult {
    double unloaded_response_v = 0.0;  // Voc swing of an unloaded cell
    double loaded_deviation_v = 0.0;   // peak-to-peak v_sc under the front-end
    bool loaded_detected = false;
    bool dedicated_detected = false;
};

HarvestConflictResult harvesting_conflict_demo(const Parameters& p,
                                               double ambient_lux,
                                               double distance_m);

// Detection with all stochastic elements disabled; used by the sweep and
// the netsim fast path.
bool deterministic_detect_design1(const Parameters& p, double ambient_lux,
                                  double distance_m, double* latency_s = nullptr);

// Largest detectable distance at the reference ambient (bisection over the
// deterministic detector).
double detection_range_design1(const Parameters& p, double ambient_lux,
                               double d_lo = 0.01, double d_hi = 2.0);

} // namespace owu
