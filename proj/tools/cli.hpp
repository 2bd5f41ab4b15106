#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lanegraph::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInternal = 3,
};

/// Runs one CLI invocation; args exclude the program name. Data goes to
/// files or `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lanegraph::cli
