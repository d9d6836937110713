#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdp::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;      // bad input, I/O failure, usage error
inline constexpr int kExitIncomplete = 2; // unserved orders or validation findings

/// Runs one `pdpsolve` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdp::cli
