#pragma once

#include <iosfwd>
#include <string>

#include "numfunnel/synth_world.hpp"

namespace numfunnel {

// Flat key=value world description, '#' comments, repeatable
// vanity_pattern lines. Unknown keys throw ConfigInvalid.
WorldConfig load_world_config(std::istream& in);
WorldConfig load_world_config_file(const std::string& path);

void write_world_config(std::ostream& out, const WorldConfig& cfg);

}  // namespace numfunnel
