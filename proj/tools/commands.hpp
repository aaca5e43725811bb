#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvlab::cli {

/// Exit codes: 0 all checks pass, 1 a bound or assertion failed, 2 usage or
/// input error.
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kUsage = 2;

/// Runs one curvlab invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvlab::cli
