#pragma once

#include <string>

#include "filterlab/experiments.hpp"

namespace filterlab {

// Parses the experiment config dialect: `[section]` headers, `key = value`
// lines, `#` comments. Sections: model, grid, perturbation, experiment.
// Unknown sections or keys are fatal (ParseError), not warnings: a silent
// typo in an experiment config invalidates the run's claims. Missing keys
// fall back to the documented defaults.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace filterlab
