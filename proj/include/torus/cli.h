#ifndef TORUS_CLI_H_
#define TORUS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "torus/errors.h"

namespace torus {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // contraction, convergence or validation failure
  kExitUsage = 2,
  kExitIo = 3,
  kExitInvalidRegime = 4,
};

int ExitCodeFor(ErrorCode code);

// args excludes the program name. Subcommands: solve, sweep, validate,
// kernels.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace torus

#endif  // TORUS_CLI_H_
