#pragma once

// Command-line front end. Exit codes: 0 success (solve: converged), 1 failed
// verification or internal error, 2 degenerate measure, 3 iteration limit,
// 4 invalid input.

#include <string>

namespace orlimink {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitDegenerate = 2;
inline constexpr int kExitMaxIters = 3;
inline constexpr int kExitInvalidInput = 4;

std::string version();

int run(int argc, char** argv);

}  // namespace orlimink
