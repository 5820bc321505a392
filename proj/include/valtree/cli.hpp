#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace valtree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBudget = 2;

/// Runs one invocation. `args` excludes the program name. Renders to `out`,
/// diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace valtree::cli
