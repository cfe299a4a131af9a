#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace synapse {

/// Exit codes of run_command.
enum ExitCode : int {
  kExitOk = 0,
  kExitDomain = 1,  // physics / numerical error (a report is still written)
  kExitUsage = 2,   // unknown subcommand or flag, malformed value
  kExitConfig = 3,  // scene file rejected
  kExitIo = 4,      // output or input file problem
};

/// Runs one CLI invocation; `args` excludes the program name. Human-readable
/// results go to `out`, diagnostics to `err`, and a JSON RunReport to the
/// --report path.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace synapse
