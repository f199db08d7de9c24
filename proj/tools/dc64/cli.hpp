#pragma once

#include <iosfwd>

namespace dc64::cli {

/// Exit codes: 0 ok, 1 engine error, 2 usage/spec/load error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitEngine = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the dc64 tool, usable in-process.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dc64::cli
