#pragma once

#include <string>

#include "json.hpp"
#include "relaylab/scenario.hpp"

namespace relaylab {

/// Parses a scenario document. Unknown keys are rejected and every
/// module-level invariant is re-checked; throws ConfigError on any problem.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

/// Emits a document that round-trips through scenario_from_json to
/// identical metrics.
nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace relaylab
