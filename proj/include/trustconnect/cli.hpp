#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trustconnect::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kUsage = 2,     // invalid flags, invalid or inconsistent inputs
  kFlagged = 3,   // detect --fail-on-flag tripped
};

/// Runs the CLI on `args` (without the program name). All terminal output goes
/// to `out` / `err`; nothing touches std::cout directly.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trustconnect::cli
