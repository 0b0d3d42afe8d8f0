// Scenario files: a single JSON document per run, every default documented
// in the README. No environment configuration except the output-directory
// override, so a run is reproducible from the file alone.
#pragma once

#include <string>

#include "granular/solver.hpp"

namespace granular {

// Parses and validates a scenario file. Throws ValidationError with line
// context on malformed JSON and descriptive messages on bad values.
Scenario parse_scenario(const std::string& path);

// Parses a scenario from a JSON string (name used in error messages).
Scenario parse_scenario_text(const std::string& text, const std::string& name);

}  // namespace granular
