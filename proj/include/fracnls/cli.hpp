#pragma once

#include <iosfwd>

namespace fracnls {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitTestFailure = 1,
  kExitConfigError = 2,
  kExitNonConvergence = 3,
};

/// Subcommands: exponents, selftest, verify-pointwise, remainder, solve, dependence.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fracnls
