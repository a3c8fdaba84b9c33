#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfpath {

inline constexpr const char* kToolVersion = "0.1.0";

/// Runs the command line `args` (without the program name). Returns the exit
/// code: 0 success, 1 runtime failure, 2 usage or configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cfpath
