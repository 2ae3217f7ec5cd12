#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace failprop::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kTopologyError = 3,
  kRuntimeError = 4,
};

/// Entry point of the `failprop` tool. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace failprop::cli
