#pragma once

// Text-level pieces of the command line front end: SNR ranges, key=value
// config files, and mapping a named setting onto ExperimentConfig.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fgmimo/harness.hpp"

namespace fgmimo::cli {

/// "A", "A:S:B" (inclusive, S > 0) or a comma separated list.
std::vector<double> parse_snr_spec(std::string_view spec);

/// key=value lines; blank lines and lines starting with '#' are skipped.
/// Pairs come back in file order. Throws std::invalid_argument with the line
/// number on malformed input.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

/// Applies one setting. `key` is the flag name without dashes. Errors are
/// std::invalid_argument whose message starts with "--key".
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Setting names accepted by apply_setting (and by config files).
const std::vector<std::string>& setting_names();

}  // namespace fgmimo::cli
