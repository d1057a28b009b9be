#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mvp::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kValidation = 2,
    kDegenerate = 3,
};

/// Runs one command line. `args[0]` is the program name. Results go to
/// `out` as JSON (or CSV / a table when requested); usage errors and the
/// grammar go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvp::cli
