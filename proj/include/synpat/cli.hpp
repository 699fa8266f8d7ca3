#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace synpat {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_internal = 1;
inline constexpr int exit_usage = 2;

// Runs the command line `args` (args[0] is the program name) with the given
// output / error streams. Subcommands: mine, threshold, simulate, baseline,
// bench.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace synpat
