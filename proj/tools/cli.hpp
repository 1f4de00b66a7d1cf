#pragma once

#include <ostream>

namespace contact::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // a check or metric failed
inline constexpr int kExitUsage = 2;    // bad flags, config or input records

// Entry point of the contactnet tool; regular output goes to `out`,
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace contact::cli
