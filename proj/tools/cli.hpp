#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pqspecial::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kViolations = 1,
    kConfigError = 2,
};

/// Runs the command line `args` (without the program name). Payload goes to
/// `out` (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pqspecial::cli
