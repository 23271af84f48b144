#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seqc::cli {

enum ExitStatus : int {
    kSuccess = 0,
    kFindings = 1,  // validation errors (or warnings under --strict-warnings), render errors
    kFailure = 2,   // usage, I/O or parse failure
};

/// Runs `seqc <validate|simulate|generate|graph> ...`. `args` includes the
/// program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqc::cli
