#pragma once

#include <string>
#include <vector>

namespace patchscout {

struct ProcessResult {
    int exit_code = -1;
    std::string output;       // captured stdout, byte-exact
    std::string diagnostics;  // captured stderr
};

// Runs a program with the given argv (argv[0] is resolved via PATH),
// optionally from a different working directory, and captures both output
// streams. A nonzero exit code is reported through the result; only a
// failure to spawn the process at all (missing binary, bad directory)
// throws ProcessError. Output is treated as raw bytes, never as text.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& working_dir = "");

} // namespace patchscout
