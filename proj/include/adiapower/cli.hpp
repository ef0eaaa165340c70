#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace adiapower::cli {

/// Exit codes are a stable contract:
/// 0 success, 1 marginal diagnosis, 2 config error, 3 solver failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMarginal = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSolverFailure = 3;

/// Run the command line given args (without the program name), writing
/// normal output to `out` and errors to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace adiapower::cli
