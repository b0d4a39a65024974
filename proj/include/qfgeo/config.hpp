#pragma once

// Flat key=value trial configuration files. Blank lines and lines starting
// with '#' are ignored; unknown keys are errors.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "qfgeo/sim.hpp"

namespace qfgeo {

inline constexpr std::string_view kVersion = "0.1.0";

// Applies one setting; throws ConfigError on an unknown key or bad value.
void apply_setting(TrialConfig& cfg, std::string_view key, std::string_view value);

TrialConfig parse_trial_config(std::istream& in);
TrialConfig load_trial_config(const std::string& path);

// Canonical form: every key, fixed order, round-trips through the parser.
// Explicit positions and flow lists are not part of the file format.
std::string serialize_trial_config(const TrialConfig& cfg);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);
std::string config_hash(const TrialConfig& cfg);

// "qfgeo <version> config=<hash> seed=<seed>"
std::string provenance(const TrialConfig& cfg);

bool parse_bool(std::string_view text);
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

}  // namespace qfgeo
