#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace projflat::cli {

enum ExitCode : int {
  kPass = 0,
  kFail = 1,
  kUsage = 2,
};

/// Runs the command line `args` (args[0] is the program name). Reports and
/// traces go to --out when given, otherwise to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace projflat::cli
