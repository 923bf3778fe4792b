#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nashcsg {

// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitUnsat = 3;

// Subcommands: check, solve-nfg, sweep, info. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nashcsg
