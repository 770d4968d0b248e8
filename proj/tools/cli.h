#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kfwer::cli {

enum ExitCode : int {
  kOk = 0,
  kRuntimeError = 1,
  kUsageError = 2,
};

/// Runs one subcommand. `args` excludes the program name. The output
/// document goes to `out`; diagnostics and usage text go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kfwer::cli
