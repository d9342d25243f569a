#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vg::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kQuery = 3,
};

// Runs one `vg` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vg::cli
