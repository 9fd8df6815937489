#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shgcn::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

// Full command-line entry point; args excludes the program name. Reports go
// to `out`, diagnostics to `err`. Output files are written only after the
// configuration validated and the command finished.
int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shgcn::cli
