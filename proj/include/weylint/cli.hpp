#pragma once

#include <iosfwd>

namespace weylint::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kUsageError = 2,
    kDomainError = 3,
};

/// Entry point behind the weylint executable. Output goes to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace weylint::cli
