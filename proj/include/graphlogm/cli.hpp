#pragma once

#include <iosfwd>

namespace graphlogm {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `graphlogm` tool: subcommands logm, bench, profile,
/// theta, stability, fit and gen. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace graphlogm
