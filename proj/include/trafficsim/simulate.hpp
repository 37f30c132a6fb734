#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trafficsim/config.hpp"

namespace traffic {

// Verb implementations behind the command-line tool; return process exit
// codes (0 ok, 1 config error, 2 runtime invariant violation) and may throw,
// which the tool maps to the same codes.
int cmd_validate(const ConfigFile& cfg, std::ostream& out);
int cmd_simulate(const ConfigFile& cfg, const std::string& model, std::ostream& log);
int cmd_converge(const ConfigFile& cfg, std::ostream& log);
int cmd_bounds_check(const ConfigFile& cfg, std::ostream& log);

}  // namespace traffic
