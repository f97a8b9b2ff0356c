#pragma once

#include <iosfwd>

namespace reskit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitUsage = 64;

// Entry point shared by the reskit executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reskit::cli
