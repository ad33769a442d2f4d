#pragma once

#include <string>

#include <json.hpp>

#include "wurpoll/engine.hpp"

namespace wurpoll {

// JSON form of SimConfig, sections mirroring the module layout. Parsing is
// strict enough that load -> serialize -> load is the identity on the
// canonical form.
nlohmann::json config_to_json(const SimConfig& cfg);
SimConfig config_from_json(const nlohmann::json& j);

SimConfig load_config_file(const std::string& path);

// FNV-1a over the canonical serialized form, rendered as 16 hex digits.
std::string config_hash(const SimConfig& cfg);

// Named synthetic world: "one", "two" or "three".
void apply_scenario_preset(SimConfig& cfg, const std::string& name,
                           int nodes_per_category);

}  // namespace wurpoll
