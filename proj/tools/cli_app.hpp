#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgeelim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitViolation = 3;

/// Runs the command line `args` (without the program name). Regular output
/// goes to `out`, diagnostics and the resolved configuration to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgeelim::cli
