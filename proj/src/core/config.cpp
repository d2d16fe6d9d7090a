#include "core/config.hpp"

#include "core/noise.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace owu {

void McuProfile::validate() const {
    if (!(active_current_a > 0.0))
        throw std::invalid_argument("netsim.mcu_active_current_a must be > 0");
    if (!(t_validate_s > 0.0) || !(t_measure_s > 0.0) || !(t_transmit_s > 0.0) ||
        !(t_flash_forward_s > 0.0))
        throw std::invalid_argument("netsim phase durations must be > 0");
}

void TrialConfig::validate(double pulse_duration_s) const {
    if (design != 1 && design != 2)
        throw std::invalid_argument("trial.design must be 1 or 2");
    if (pulses < 1)
        throw std::invalid_argument("trial.pulses must be >= 1");
    if (!(pulse_period_s > pulse_duration_s))
        throw std::invalid_argument("trial.period_s must exceed the pulse duration");
    if (ambient_lux < 0.0 || !(distance_m > 0.0))
        throw std::invalid_argument("trial ambient/distance out of range");
    noise.validate();
}

void NetsimConfig::validate() const {
    mcu.validate();
    if (!(storage_capacitance_f > 0.0) || storage_initial_v < 0.0)
        throw std::invalid_argument("netsim storage parameters invalid");
    if (!(conversion_efficiency > 0.0) || conversion_efficiency > 1.0)
        throw std::invalid_argument("netsim.conversion_efficiency must lie in (0, 1]");
    if (brownout_energy_j < 0.0)
        throw std::invalid_argument("netsim.brownout_energy_j must be >= 0");
}

void SweepConfig::validate() const {
    if (r1_list.empty() || r2_list.empty() || c1_list.empty())
        throw std::invalid_argument("sweep lists must be non-empty");
    if (objective != "max_range" && objective != "min_standby" &&
        objective != "pareto")
        throw std::invalid_argument(
            "sweep.objective must be max_range, min_standby or pareto");
    if (reference_lux < 0.0)
        throw std::invalid_argument("sweep.reference_lux must be >= 0");
}

Parameters Parameters::defaults() {
    Parameters p;
    p.design1 = default_design1();
    p.design2 = default_design2();
    return p;
}

void Parameters::validate() const {
    if (!(efficacy_lm_per_w > 0.0))
        throw std::invalid_argument("optics.efficacy_lm_per_w must be > 0");
    transmitter.validate();
    design1.validate();
    design2.validate();
    frontend.validate();
    noise.validate();
    trial.validate(transmitter.pulse.duration_s);
    netsim.validate();
    sweep.validate();
    if (transmitter.pulse.duration_s < 1e-3 || transmitter.pulse.duration_s > 0.5)
        throw std::invalid_argument("optics.pulse_duration_s must lie in [1 ms, 500 ms]");
    if (grid_lux.empty() || grid_distance.empty())
        throw std::invalid_argument("grid lists must be non-empty");
    for (double d : grid_distance)
        if (!(d > 0.0))
            throw std::invalid_argument("grid.distance_list entries must be > 0");
    for (double l : grid_lux)
        if (l < 0.0)
            throw std::invalid_argument("grid.lux_list entries must be >= 0");
    if (!(race_distance_m > 0.0) || race_repeats < 1)
        throw std::invalid_argument("race parameters out of range");
}

namespace {

struct KeyDef {
    enum class Type { Double, Int, U64, Bool, Str, List };
    Type type;
    std::function<std::string(const Parameters&)> get;
    std::function<void(Parameters&, const std::string&)> set;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace((unsigned char)s[pos]))
            ++pos;
        if (pos != s.size())
            throw std::exception();
        return v;
    } catch (...) {
        throw std::invalid_argument("key '" + key + "': expected a number, got '" + s + "'");
    }
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(item, key));
    if (out.empty())
        throw std::invalid_argument("key '" + key + "': expected a list of numbers");
    return out;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        out += fmt_double(v[i]);
    }
    return out;
}

using Registry = std::map<std::string, KeyDef>;

void add_double(Registry& r, const std::string& name, double Parameters::* unused,
                std::function<double&(Parameters&)> ref) {
    (void)unused;
    r[name] = KeyDef{
        KeyDef::Type::Double,
        [ref](const Parameters& p) { return fmt_double(ref(const_cast<Parameters&>(p))); },
        [ref, name](Parameters& p, const std::string& s) { ref(p) = parse_double(s, name); }};
}

#define DBL(NAME, EXPR)                                                        \
    add_double(reg, NAME, nullptr,                                            \
               [](Parameters& p) -> double& { return EXPR; })

#define LIST(NAME, EXPR)                                                       \
    reg[NAME] = KeyDef{KeyDef::Type::List,                                     \
                       [](const Parameters& p) { return fmt_list(EXPR); },     \
                       [](Parameters& p, const std::string& s) {               \
                           EXPR = parse_list(s, NAME);                         \
                       }}

#define INTKEY(NAME, EXPR)                                                     \
    reg[NAME] = KeyDef{KeyDef::Type::Int,                                      \
                       [](const Parameters& p) { return std::to_string(EXPR); },\
                       [](Parameters& p, const std::string& s) {               \
                           EXPR = (int)parse_double(s, NAME);                  \
                       }}

#define U64KEY(NAME, EXPR)                                                     \
    reg[NAME] = KeyDef{KeyDef::Type::U64,                                      \
                       [](const Parameters& p) { return std::to_string(EXPR); },\
                       [](Parameters& p, const std::string& s) {               \
                           EXPR = (std::uint64_t)std::stoull(s);               \
                       }}

#define BOOLKEY(NAME, EXPR)                                                    \
    reg[NAME] = KeyDef{KeyDef::Type::Bool,                                     \
                       [](const Parameters& p) {                               \
                           return std::string(EXPR ? "true" : "false");        \
                       },                                                      \
                       [](Parameters& p, const std::string& s) {               \
                           if (s == "true" || s == "1")                        \
                               EXPR = true;                                    \
                           else if (s == "false" || s == "0")                  \
                               EXPR = false;                                   \
                           else                                                \
                               throw std::invalid_argument("key '" NAME        \
                                                           "': expected bool");\
                       }}

const Registry& registry() {
    static const Registry reg = [] {
        Registry reg;
        DBL("optics.efficacy_lm_per_w", p.efficacy_lm_per_w);
        DBL("optics.tx_power_w", p.transmitter.optical_power_w);
        DBL("optics.tx_viewing_angle_deg", p.transmitter.viewing_angle_deg);
        DBL("optics.pulse_duration_s", p.transmitter.pulse.duration_s);
        DBL("optics.pulse_rise_s", p.transmitter.pulse.rise_s);
        DBL("optics.pulse_fall_s", p.transmitter.pulse.fall_s);

        DBL("solar.area_mm2", p.design1.solar.area_mm2);
        DBL("solar.voc_a", p.design1.solar.voc_coeff_a);
        DBL("solar.voc_b", p.design1.solar.voc_coeff_b);
        DBL("solar.knee_lux", p.design1.solar.knee_lux);
        DBL("solar.knee_b", p.design1.solar.knee_coeff_b);
        DBL("solar.response_time_ref_s", p.design1.solar.response_time_ref_s);
        DBL("solar.response_area_ref_mm2", p.design1.solar.response_area_ref_mm2);
        DBL("solar.flash_lux_per_w_m2", p.design1.solar.flash_lux_per_w_m2);
        reg["solar.rsc_lux"] = KeyDef{
            KeyDef::Type::List,
            [](const Parameters& p) {
                std::vector<double> v;
                for (auto& q : p.design1.solar.series_resistance.points)
                    v.push_back(q.first);
                return fmt_list(v);
            },
            [](Parameters& p, const std::string& s) {
                auto v = parse_list(s, "solar.rsc_lux");
                auto& pts = p.design1.solar.series_resistance.points;
                if (pts.size() != v.size())
                    pts.resize(v.size(), {0.0, 1.0});
                for (std::size_t i = 0; i < v.size(); ++i)
                    pts[i].first = v[i];
            }};
        reg["solar.rsc_ohm"] = KeyDef{
            KeyDef::Type::List,
            [](const Parameters& p) {
                std::vector<double> v;
                for (auto& q : p.design1.solar.series_resistance.points)
                    v.push_back(q.second);
                return fmt_list(v);
            },
            [](Parameters& p, const std::string& s) {
                auto v = parse_list(s, "solar.rsc_ohm");
                auto& pts = p.design1.solar.series_resistance.points;
                if (pts.size() != v.size())
                    pts.resize(v.size(), {0.0, 1.0});
                for (std::size_t i = 0; i < v.size(); ++i)
                    pts[i].second = v[i];
            }};

        DBL("design1.r1_ohm", p.design1.r1_ohm);
        DBL("design1.r2_ohm", p.design1.r2_ohm);
        DBL("design1.c1_f", p.design1.c1_f);
        DBL("design1.r_gs_nmos1_ohm", p.design1.r_gs_nmos1_ohm);
        DBL("design1.r_aux_ohm", p.design1.r_aux_ohm);
        DBL("design1.supply_voltage_v", p.design1.supply_voltage_v);
        DBL("design1.c_gate_nmos1_f", p.design1.c_gate_nmos1_f);
        DBL("design1.r_mcu_load_ohm", p.design1.r_mcu_load_ohm);
        DBL("design1.rsc_tracking_tau_s", p.design1.r_sc_tracking_tau_s);

        DBL("pmos1.vth_v", p.design1.pmos1.vgs_threshold_v);
        DBL("pmos1.swing_v_per_decade", p.design1.pmos1.subthreshold_swing_v);
        DBL("pmos1.off_floor_a", p.design1.pmos1.off_current_floor_a);
        DBL("pmos1.on_resistance_ohm", p.design1.pmos1.on_resistance_ohm);
        DBL("pmos1.threshold_current_a", p.design1.pmos1.threshold_current_a);
        DBL("nmos1.vth_v", p.design1.nmos1.vgs_threshold_v);
        DBL("nmos1.swing_v_per_decade", p.design1.nmos1.subthreshold_swing_v);
        DBL("nmos1.off_floor_a", p.design1.nmos1.off_current_floor_a);
        DBL("nmos1.on_resistance_ohm", p.design1.nmos1.on_resistance_ohm);
        DBL("nmos1.threshold_current_a", p.design1.nmos1.threshold_current_a);
        DBL("pmos2.vth_v", p.design1.pmos2.vgs_threshold_v);
        DBL("pmos2.swing_v_per_decade", p.design1.pmos2.subthreshold_swing_v);
        DBL("pmos2.off_floor_a", p.design1.pmos2.off_current_floor_a);
        DBL("pmos2.on_resistance_ohm", p.design1.pmos2.on_resistance_ohm);
        DBL("pmos2.threshold_current_a", p.design1.pmos2.threshold_current_a);

        DBL("pt.area_mm2", p.design2.pt.sensitive_area_mm2);
        DBL("pt.responsivity_a_per_w_m2", p.design2.pt.responsivity_a_per_w_m2);
        DBL("pt.tau_on_s", p.design2.pt.response_time_on_s);
        DBL("pt.tau_off_s", p.design2.pt.response_time_off_s);
        DBL("pt.ref_current_a", p.design2.pt.response_ref_current_a);
        DBL("pt.tau_max_s", p.design2.pt.response_time_max_s);
        DBL("pt.coating_attenuation", p.design2.pt.coating_attenuation);
        DBL("pt.ambient_efficacy_lm_per_w", p.design2.pt.ambient_efficacy_lm_per_w);

        DBL("ldr.r0_ohm", p.design2.ldr.r0_ohm);
        DBL("ldr.gamma", p.design2.ldr.gamma);
        DBL("ldr.dark_ohm", p.design2.ldr.dark_resistance_ohm);
        DBL("ldr.tau_fall_s", p.design2.ldr.tau_fall_s);
        DBL("ldr.tau_rise_s", p.design2.ldr.tau_rise_s);
        DBL("ldr.coating_attenuation", p.design2.ldr.coating_attenuation);

        DBL("design2.r_bias_ohm", p.design2.r_bias_ohm);
        DBL("design2.supply_voltage_v", p.design2.supply_voltage_v);
        DBL("design2.c_gate_nmos1_f", p.design2.c_gate_nmos1_f);
        DBL("design2.r_mcu_load_ohm", p.design2.r_mcu_load_ohm);
        DBL("design2.nmos1_vth_v", p.design2.nmos1.vgs_threshold_v);
        DBL("design2.nmos1_swing_v_per_decade", p.design2.nmos1.subthreshold_swing_v);
        DBL("design2.pmos_vth_v", p.design2.pmos_chain.vgs_threshold_v);

        reg["frontend.kind"] = KeyDef{
            KeyDef::Type::Str,
            [](const Parameters& p) {
                return std::string(p.frontend.kind == HarvestFrontEnd::Kind::PmicMppt
                                       ? "pmic"
                                       : "schottky");
            },
            [](Parameters& p, const std::string& s) {
                if (s == "pmic")
                    p.frontend.kind = HarvestFrontEnd::Kind::PmicMppt;
                else if (s == "schottky")
                    p.frontend.kind = HarvestFrontEnd::Kind::Schottky;
                else
                    throw std::invalid_argument(
                        "key 'frontend.kind': expected pmic or schottky");
            }};
        DBL("frontend.clamp_fraction", p.frontend.clamp_fraction);
        DBL("frontend.mppt_tau_s", p.frontend.mppt_tracking_tau_s);
        DBL("frontend.schottky_drop_v", p.frontend.schottky_drop_v);
        DBL("frontend.storage_voltage_v", p.frontend.storage_voltage_v);
        DBL("frontend.storage_capacitance_f", p.frontend.storage_capacitance_f);

        DBL("noise.flicker_frac", p.noise.ambient_flicker_sd_frac);
        DBL("noise.flicker_bandwidth_hz", p.noise.flicker_bandwidth_hz);
        DBL("noise.amplitude_jitter_frac", p.noise.amplitude_jitter_frac);

        INTKEY("trial.design", p.trial.design);
        DBL("trial.ambient_lux", p.trial.ambient_lux);
        DBL("trial.distance_m", p.trial.distance_m);
        INTKEY("trial.pulses", p.trial.pulses);
        DBL("trial.period_s", p.trial.pulse_period_s);
        U64KEY("trial.seed", p.trial.rng_seed);

        LIST("grid.lux_list", p.grid_lux);
        LIST("grid.distance_list", p.grid_distance);

        DBL("race.distance_m", p.race_distance_m);
        INTKEY("race.repeats", p.race_repeats);

        DBL("netsim.mcu_active_current_a", p.netsim.mcu.active_current_a);
        DBL("netsim.phase_validate_s", p.netsim.mcu.t_validate_s);
        DBL("netsim.phase_measure_s", p.netsim.mcu.t_measure_s);
        DBL("netsim.phase_transmit_s", p.netsim.mcu.t_transmit_s);
        DBL("netsim.phase_flash_forward_s", p.netsim.mcu.t_flash_forward_s);
        DBL("netsim.storage_capacitance_f", p.netsim.storage_capacitance_f);
        DBL("netsim.storage_initial_v", p.netsim.storage_initial_v);
        DBL("netsim.conversion_efficiency", p.netsim.conversion_efficiency);
        DBL("netsim.brownout_energy_j", p.netsim.brownout_energy_j);
        BOOLKEY("netsim.use_detection_cache", p.netsim.use_detection_cache);

        LIST("sweep.r1_list", p.sweep.r1_list);
        LIST("sweep.r2_list", p.sweep.r2_list);
        LIST("sweep.c1_list", p.sweep.c1_list);
        reg["sweep.objective"] = KeyDef{
            KeyDef::Type::Str,
            [](const Parameters& p) { return p.sweep.objective; },
            [](Parameters& p, const std::string& s) { p.sweep.objective = s; }};
        DBL("sweep.reference_lux", p.sweep.reference_lux);
        return reg;
    }();
    return reg;
}

#undef DBL
#undef LIST
#undef INTKEY
#undef U64KEY
#undef BOOLKEY

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct RawSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> kv;
    int line = 0;
};

std::vector<RawSection> tokenize(const std::string& text) {
    std::vector<RawSection> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    RawSection* cur = nullptr;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';')
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("line " + std::to_string(lineno) +
                                            ": malformed section header");
            out.push_back({trim(t.substr(1, t.size() - 2)), {}, lineno});
            cur = &out.back();
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        if (!cur)
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": key outside any [section]");
        cur->kv.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return out;
}

AmbientProfile::Segment parse_segment(const std::string& item) {
    std::vector<std::string> f;
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ':'))
        f.push_back(trim(tok));
    if (f.size() < 3)
        throw std::invalid_argument("ambient.segments: expected start:kind:lux[...]");
    AmbientProfile::Segment s;
    s.start_s = parse_double(f[0], "ambient.segments");
    if (f[1] == "constant") {
        s.kind = AmbientProfile::Kind::Constant;
        s.lux_a = parse_double(f[2], "ambient.segments");
    } else if (f[1] == "step") {
        s.kind = AmbientProfile::Kind::Step;
        s.lux_a = parse_double(f[2], "ambient.segments");
    } else if (f[1] == "ramp") {
        if (f.size() < 4)
            throw std::invalid_argument("ambient.segments: ramp needs start:ramp:from:to");
        s.kind = AmbientProfile::Kind::LinearRamp;
        s.lux_a = parse_double(f[2], "ambient.segments");
        s.lux_b = parse_double(f[3], "ambient.segments");
    } else {
        throw std::invalid_argument("ambient.segments: unknown kind '" + f[1] + "'");
    }
    return s;
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    cfg.params = Parameters::defaults();
    const Registry& reg = registry();

    for (const RawSection& sec : tokenize(text)) {
        if (sec.name.rfind("node ", 0) == 0 || sec.name == "node") {
            NodeSpec n;
            n.id = sec.name == "node" ? ("n" + std::to_string(cfg.nodes.size()))
                                      : trim(sec.name.substr(5));
            for (const auto& [k, v] : sec.kv) {
                if (k == "x_m")
                    n.position[0] = parse_double(v, k);
                else if (k == "y_m")
                    n.position[1] = parse_double(v, k);
                else if (k == "z_m")
                    n.position[2] = parse_double(v, k);
                else if (k == "dir_x")
                    n.orientation[0] = parse_double(v, k);
                else if (k == "dir_y")
                    n.orientation[1] = parse_double(v, k);
                else if (k == "dir_z")
                    n.orientation[2] = parse_double(v, k);
                else if (k == "initial_storage_j")
                    n.initial_storage_j = parse_double(v, k);
                else
                    throw std::invalid_argument("unknown key '" + k +
                                                "' in [" + sec.name + "]");
            }
            cfg.nodes.push_back(n);
            continue;
        }
        if (sec.name == "scenario") {
            for (const auto& [k, v] : sec.kv) {
                if (k == "horizon_s")
                    cfg.horizon_s = parse_double(v, k);
                else if (k == "seed")
                    cfg.seed = (std::uint64_t)std::stoull(v);
                else if (k == "flash_node") {
                    if (cfg.flashes.empty())
                        cfg.flashes.push_back({});
                    for (auto& f : cfg.flashes)
                        if (f.node_id.empty())
                            f.node_id = v;
                } else if (k == "flash_times_s") {
                    const std::string node =
                        cfg.flashes.empty() ? "" : cfg.flashes.front().node_id;
                    cfg.flashes.clear();
                    for (double t : parse_list(v, k))
                        cfg.flashes.push_back({node, t});
                } else if (k == "ambient_lux") {
                    cfg.ambient = AmbientProfile::constant(parse_double(v, k));
                } else {
                    throw std::invalid_argument("unknown key '" + k +
                                                "' in [scenario]");
                }
            }
            continue;
        }
        if (sec.name == "ambient") {
            for (const auto& [k, v] : sec.kv) {
                if (k != "segments")
                    throw std::invalid_argument("unknown key '" + k +
                                                "' in [ambient]");
                cfg.ambient.segments.clear();
                std::stringstream ss(v);
                std::string item;
                while (std::getline(ss, item, ','))
                    cfg.ambient.segments.push_back(parse_segment(item));
            }
            cfg.ambient.validate();
            continue;
        }
        for (const auto& [k, v] : sec.kv) {
            const std::string full = sec.name + "." + k;
            auto it = reg.find(full);
            if (it == reg.end())
                throw std::invalid_argument("unknown key '" + k + "' in [" +
                                            sec.name + "]");
            it->second.set(cfg.params, v);
        }
    }

    cfg.params.validate();
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const Parameters& p) {
    const Registry& reg = registry();
    std::string out, last_section;
    for (const auto& [full, def] : reg) {
        const auto dot = full.find('.');
        const std::string section = full.substr(0, dot);
        const std::string key = full.substr(dot + 1);
        if (section != last_section) {
            if (!out.empty())
                out += "\n";
            out += "[" + section + "]\n";
            last_section = section;
        }
        out += key + " = " + def.get(p) + "\n";
    }
    return out;
}

std::uint64_t parameter_hash(const Parameters& p) {
    const std::string s = render_config(p);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace owu
