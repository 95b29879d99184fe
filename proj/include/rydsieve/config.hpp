#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydsieve/trajectories.hpp"

namespace rydsieve {

// A parsed and fully resolved run description.  Config files use plain Hz
// (a value quoted as 2pi x 20 kHz is entered as 2.0e4); everything in
// `run` is already converted to rad/s.  `resolved` echoes the complete
// effective configuration, defaults and derived values included, in the
// file's Hz convention; `hash` fingerprints that echo.
struct ConfigFile {
  RunConfig run;
  double delta = 0.0;  // number-splitting shift, rad/s
  bool emit_trajectories = false;
  bool refined = false;  // delta_p re-centered on the full-model resonance
  std::vector<std::string> warnings;
  std::uint64_t hash = 0;
  nlohmann::json resolved;
};

ConfigFile parse_config(const nlohmann::json& doc);
ConfigFile load_config(const std::string& path);

}
