#pragma once

#include <iosfwd>

namespace kennedy::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_io = 3;
inline constexpr int exit_not_converged = 4;

/// Entry point of the `kennedy` tool. Subcommands: sweep, optimize, figure,
/// validate. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace kennedy::cli
