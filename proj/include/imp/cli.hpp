#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imp::cli {

enum ExitCode { kSuccess = 0, kUserError = 1, kInternalError = 2 };

/// Entry point of the `cimp` driver. `args[0]` is the program name.
/// Diagnostics go to `err` as `FILE:line:col: error: message`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace imp::cli
