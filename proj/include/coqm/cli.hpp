#pragma once

#include <ostream>

namespace coqm {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitUsage = 64;

/// Environment variable naming the default output root (default: ./coqm-runs).
inline constexpr const char* kOutputRootEnv = "COQM_OUTPUT_ROOT";

/// Runs `coqm <command> ...`: build {ideal, smooth, fnb, partial-sum}, solve, plan and
/// experiment <name>. Every run writes config-echo.json (the resolved configuration,
/// replayable through --config) and its artifacts into one output directory; a short
/// summary goes to `out`, diagnostics to `err`. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coqm
