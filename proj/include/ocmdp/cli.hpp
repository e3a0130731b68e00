#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ocmdp::cli {

/// Exit codes: 0 success, 1 invalid input file or failed computation,
/// 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ocmdp::cli
