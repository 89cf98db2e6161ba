#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace priorplug::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3 };

/// Parses `args` (without the program name), runs one subcommand and returns
/// the process exit code. Results go to `out` as JSON; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace priorplug::cli
