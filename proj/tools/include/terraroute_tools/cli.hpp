#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace terraroute::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // also validation errors and unreadable inputs
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitVerification = 3;

// Runs the `terraroute` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace terraroute::cli
