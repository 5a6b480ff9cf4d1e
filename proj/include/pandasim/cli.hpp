#pragma once

#include <iosfwd>

namespace pandasim {

/// Exit codes: 0 success, 1 unexpected failure, 2 bad config / input data / usage,
/// 3 file system failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitIo = 3;

/// Commands: sweep, analyze, export, serve. See README for flags.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pandasim
