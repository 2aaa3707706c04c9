#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lnagell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRefuted = 2;
inline constexpr int kExitUsage = 64;

/// Parses `args` (without the program name), runs the subcommand and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lnagell::cli
