#pragma once

#include <ostream>

namespace gcruin {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

/// Runs one subcommand (sample, convolve, transform, walk, safety, ruin).
/// Data goes to `out` unless --out names a directory; the one-line summary
/// goes to `err` in the first case and to `out` in the second.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gcruin
