#pragma once

#include "core/params.hpp"

#include <map>
#include <string>
#include <vector>

namespace owu {

// A measured quantity the fit must hit. Numeric anchors carry a target and
// relative tolerance; detection anchors pin whether a (lux, distance) cell
// fires.
struct Anchor {
    enum class Kind {
        Voc,            // target volts at `lux`
        StandbyCurrent, // target amps at `lux`
        Detect,         // the cell (lux, distance) must fire
        Miss,           // the cell (lux, distance) must not fire
    };
    Kind kind = Kind::StandbyCurrent;
    std::string name;
    double lux = 0.0;
    double distance_m = 0.0;
    double target = 0.0;
    double rel_tolerance = 0.30;
};

std::vector<Anchor> default_anchor_set();

struct CalibrationRecord {
    std::string id = "default";
    bool converged = false;
    std::map<std::string, double> values;    // fitted free parameters
    std::map<std::string, double> residuals; // per anchor, in tolerance units
    std::string worst_anchor;
    double worst_residual = 0.0;

    std::string to_text() const;
    static CalibrationRecord from_text(const std::string& text);

    void apply(Parameters& p) const;
    static CalibrationRecord snapshot(const Parameters& p, const std::string& id);
};

// Bounded least-squares fit of the free parameter vector against the
// anchor set. Residuals above one tolerance unit leave the record marked
// unconverged, naming the worst anchor.
CalibrationRecord calibrate(const Parameters& base,
                            const std::vector<Anchor>& anchors);

} // namespace owu
