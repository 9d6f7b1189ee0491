#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace repairlab::cli {

/// Process exit statuses. They report whether the computation succeeded; verdicts are part of the output.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_unsupported = 3,
    exit_input = 4,
};

/// Runs one command line (without the program name) and returns its exit status.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}
