#pragma once

#include <iosfwd>

namespace wgvqe {

/// Process exit codes of the command-line driver.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,    ///< unknown flag, missing argument, missing --seed
  kExitConfig = 3,   ///< invalid configuration or argument value
  kExitIo = 4,       ///< unreadable input or unwritable output
  kExitRuntime = 5,  ///< numerical failure during a run
};

/// Entry point of the `wgvqe` tool. Diagnostics go to `err`, progress
/// and file listings to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wgvqe
