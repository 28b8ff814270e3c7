#pragma once

#include <stdexcept>
#include <string>

#include "mmfees/simulation.hpp"

namespace mmfees {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value file; '#' starts a comment. Unknown keys and malformed
// values are errors. Missing keys keep the baseline defaults.
ExperimentConfig load_config(const std::string& path);

// Apply one key=value pair; throws ConfigError on unknown key or bad value.
void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Range checks shared by the file loader and CLI overrides.
void validate_config(const ExperimentConfig& cfg);

}  // namespace mmfees
