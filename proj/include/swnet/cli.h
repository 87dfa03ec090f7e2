#pragma once

#include <iosfwd>

namespace swnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

// Entry point of the swnet command line tool. Diagnostics go to `err`;
// data written without --out goes to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swnet
