#pragma once

#include "voicepilot/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace voicepilot {

// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitInput = 3,
    kExitNoSpeech = 4, // also rejection and failed training
    kExitStoreCorrupt = 5,
};

int exit_code_for(ErrorKind kind);

// Runs the `voicepilot` command line. args[0] is the program name.
// Normal output goes to `out`, diagnostics and warnings to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace voicepilot
