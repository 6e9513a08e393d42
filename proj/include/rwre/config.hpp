// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: an INI/TOML-style text file with [env], [experiment]
// and [rde] sections. Each value is read as JSON when it parses as JSON
// (numbers, booleans, arrays, quoted strings) and as a bare string otherwise,
// so `atoms = [[0.25, 0.5], [0.75, 0.5]]` and `children_model = iid_children`
// both work.
#pragma once

#include <string>

#include "json.hpp"
#include "rwre/environment.hpp"

namespace rwre {

/// Section -> key -> value. Throws CONFIG on unreadable or malformed files.
nlohmann::json load_config(const std::string& path);
nlohmann::json parse_config(const std::string& text);

/// Builds the spec from the [env] section. Throws CONFIG when it is missing.
EnvSpec env_from_config(const nlohmann::json& config);

}  // namespace rwre
