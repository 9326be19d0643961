#pragma once

#include <string>

#include "suntrack/sim_harness.hpp"
#include "suntrack/toml_lite.hpp"

namespace suntrack {

/// Builds a validated Scenario from a parsed document. Unknown tables or
/// keys, missing [motor]/[reference], or having both/neither of
/// [smc]/[smmmc] raise toml::ParseError with the offending line.
/// Angles can be given in degrees (target_deg, rate_deg_s, anchors_deg_s)
/// or radians (target, rate, anchors); the serializer emits radians so a
/// round trip reproduces the Scenario exactly.
Scenario scenario_from_document(const toml::Document& doc);

Scenario load_scenario(const std::string& path);

toml::Document scenario_to_document(const Scenario& sc);

std::string scenario_to_toml(const Scenario& sc);

}  // namespace suntrack
