#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levy_elliptic {

/// Exit codes of the command-line runner.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

/// Runs the command line (args excludes the program name). Messages go to
/// `out` and `err`; files are written below the configured output directory.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levy_elliptic
