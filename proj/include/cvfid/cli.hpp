#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvfid::cli {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;         ///< unknown subcommand, bad flags or configuration
inline constexpr int kExitInvalidState = 3;  ///< unreadable or invalid state, domain error
inline constexpr int kExitNumerical = 4;     ///< consistency or cutoff error, failed oracle check

/// Runs one subcommand.  `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvfid::cli
