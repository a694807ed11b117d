#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyres::cli {

/// Process exit codes. Usage errors use CLI11's codes (>= 100).
enum ExitCode : int {
    kOk = 0,
    kInputError = 1,        // parse, topology or argument error in an input file
    kNonConvergence = 2,
    kDivergence = 3,
    kInvalidCenter = 4,
    kLpInfeasible = 5,      // seqopt: the first restriction LP is infeasible
    kNumericalError = 6,
};

/// Runs the tool with `args` (args[0] is the program name). Results go to
/// `out` unless redirected by --out; diagnostics and tables go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyres::cli
