#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semkg::cli {

enum ExitCode : int {
  kOk = 0,
  kFindings = 1,
  kUsage = 2,
  kHalted = 3,
};

/// Entry point shared by the `semkg` binary and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semkg::cli
