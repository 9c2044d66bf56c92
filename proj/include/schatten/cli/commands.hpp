#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace schatten::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSizeGuard = 3;
inline constexpr int kExitValidation = 4;

/// Parses `args` (without the program name), runs one subcommand and
/// returns the process exit code. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schatten::cli
