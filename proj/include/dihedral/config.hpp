#pragma once

// JSON (de)serialization of obstacle + placement:
// {"family":"regular_polygon","n":4,"circumradius":0.285,"epsilon":0.0,
//  "d":0.5,"t":0.0,"lambda":1.0,"r1":1.0,"M":1.0}

#include <filesystem>
#include <string>

#include "dihedral/geometry.hpp"

namespace dihedral {

/// Parses a configuration; missing placement keys take the defaults
/// (d = 0, t = 0, lambda = 1, r1 = 1, M = 1). Throws InvalidSpec.
Configuration parse_configuration(const std::string& json_text);
Configuration load_configuration(const std::filesystem::path& path);
std::string to_json(const Configuration& config);

}  // namespace dihedral
