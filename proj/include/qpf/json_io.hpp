#pragma once

#include <string>

#include "qpf/core_types.hpp"

namespace qpf {

/// Parses a run configuration from JSON text. Schema:
///   {omega, gamma_o, gamma_u, dt, T, theta_grid_n, seed}
/// All seven keys are required; rates are in 1/T_gamma, times in T_gamma.
/// Throws std::invalid_argument naming the first missing or ill-typed key,
/// and relays Params::validate failures.
Params params_from_json_text(const std::string& text);

/// Loads params_from_json_text from a file path.
Params params_from_json_file(const std::string& path);

/// Canonical one-line serialization used for config hashing: fixed key
/// order, round-trip number formatting.
std::string canonical_config_string(const Params& params);

}  // namespace qpf
