#pragma once

#include "core/params.hpp"

#include <string>
#include <vector>

namespace owu {

struct NodeSpec {
    std::string id;
    double position[3] = {0.0, 0.0, 0.0};
    double orientation[3] = {1.0, 0.0, 0.0};
    double initial_storage_j = -1.0; // <0: derive from netsim storage defaults
};

struct FlashEvent {
    std::string node_id;
    double time_s = 0.0;
};

// A parsed configuration: the parameter set plus the optional network
// scenario sections (nodes, ambient profile, flash schedule).
struct ScenarioConfig {
    Parameters params;
    std::vector<NodeSpec> nodes;
    AmbientProfile ambient = AmbientProfile::constant(400.0);
    std::vector<FlashEvent> flashes;
    double horizon_s = 60.0;
    std::uint64_t seed = 12345;
};

// Parse the documented tree-of-sections text. Unknown sections or keys,
// type mismatches and invariant violations raise std::invalid_argument
// naming the offending key.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// Canonical text for a parameter set; parse_config(render(p)).params == p.
std::string render_config(const Parameters& p);

// Stable hash of the canonical rendering, for run summaries.
std::uint64_t parameter_hash(const Parameters& p);

} // namespace owu
