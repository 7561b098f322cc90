#pragma once

// The causat command line as a library entry point, so tests can drive it
// without spawning processes.

#include <ostream>
#include <string>
#include <vector>

namespace causat::cli {

/// Exit codes.
inline constexpr int kTrue = 0;
inline constexpr int kFalse = 1;
inline constexpr int kUndefined = 2;
inline constexpr int kUsage = 64;
inline constexpr int kParse = 65;
inline constexpr int kModel = 66;
inline constexpr int kInternal = 70;

/// `args` excludes the program name.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causat::cli
