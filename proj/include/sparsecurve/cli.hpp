#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sparsecurve::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one command line (without the program name). Reports go to `out`,
/// one-line diagnostics to `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparsecurve::cli
