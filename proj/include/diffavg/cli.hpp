#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diffavg::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kValidationError = 2;
inline constexpr int kNumericalError = 3;

/// Runs the `diffavg` command line. `args` excludes the program name.
/// Failures print one line `<kind>_error: <reason>` to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace diffavg::cli
