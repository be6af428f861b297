#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bellsim::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kIoError = 2,
    kInvariantError = 3,
};

/// Runs one command line (program name excluded). Normal output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellsim::cli
