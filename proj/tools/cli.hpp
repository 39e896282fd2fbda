#pragma once

#include <ostream>

namespace dqm::cli {

// Exit codes of every subcommand.
enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsage = 2, kIoOrFormat = 3 };

// Runs the command line argv[1..argc) as `dqmotion <subcommand> ...`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dqm::cli
