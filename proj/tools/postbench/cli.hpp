#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace postbench {

enum ExitCode : int { kOk = 0, kMismatch = 1, kUsage = 2, kFailure = 3 };

/// Runs the command line with `args` (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace postbench
