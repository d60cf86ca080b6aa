#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace credal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitMath = 4;

/// Runs the `credal` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace credal::cli
