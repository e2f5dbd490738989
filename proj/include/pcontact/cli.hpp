#pragma once

#include <iosfwd>

namespace pcontact::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kHypothesisViolation = 2,
    kContinuationFailure = 3,
    kVerificationFailed = 4,
};

/// Entry point of `pcontact`, with streams injected so tests can run it
/// in-process. Results go to `out` (or the --out / config output path),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcontact::cli
