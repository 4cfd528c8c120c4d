#ifndef NCBALL_CLI_HPP
#define NCBALL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ncball::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUndecided = 2;  // Boundary or Unknown verdicts

/// Runs one command line (args[0] is the program name). The JSON report goes
/// to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncball::cli

#endif  // NCBALL_CLI_HPP
