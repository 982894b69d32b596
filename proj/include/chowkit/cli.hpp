#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chowkit::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  ///< a verification did not hold
inline constexpr int kExitUsage = 2;   ///< invalid flags, parse errors, domain errors

/// Runs the tool on argv-style arguments (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chowkit::cli
