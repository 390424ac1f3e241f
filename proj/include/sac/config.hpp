#ifndef SAC_CONFIG_HPP
#define SAC_CONFIG_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sac/experiments.hpp"

namespace sac {

/// Parses sectioned `key = value` text. Unknown sections or keys raise ConfigError listing all of them.
/// A `[manifest]` section is skipped so a run manifest can be fed back as a config.
StudyConfig parse_config(std::string_view text);
StudyConfig load_config(const std::filesystem::path& path);

/// Canonical text for `cfg`; parse_config(to_config_text(cfg)) reproduces it exactly.
std::string to_config_text(const StudyConfig& cfg);

std::vector<std::string> preset_names();
StudyConfig load_preset(std::string_view name);
std::string_view preset_text(std::string_view name);

/// Accepts decimal numbers and powers of two written as `2^-3`.
double parse_number(std::string_view text);

}  // namespace sac

#endif  // SAC_CONFIG_HPP
