#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace migsched {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_failed = 1,  // a solver, validation or acceptance check did not succeed
  exit_usage = 2,   // bad command line
  exit_input = 3,   // unreadable or malformed input file
};

/// Runs one command; `args` excludes the program name. Documents go to the
/// --out file, else to $MIGSCHED_OUT_DIR/<default name>, else to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace migsched
