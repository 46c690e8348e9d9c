#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nucseg {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  ///< bad flags, config or parameter invariant
inline constexpr int kExitData = 2;   ///< unreadable or malformed data, fit failure

/// Runs the front end on `args` (without the program name). Subcommands:
/// synth, binarize, segment, eval.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace nucseg
