#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ruo {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,     // parse or validation failure
  kExitNumeric = 3,   // solver failure or inconsistent constructions
  kExitTheorem = 4,   // a verification check failed or was skipped
};

/// Runs one subcommand (spectrum, attractors, evolve, asymptote, choi,
/// verify, builtin). args excludes the program name. Reports go to out,
/// diagnostics to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ruo
