#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace llg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on a numerical or assertion failure, 2 on usage or parse errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace llg::cli
