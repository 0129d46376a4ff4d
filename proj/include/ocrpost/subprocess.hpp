#pragma once

#include <string>

namespace ocrpost {

struct CommandResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string out;
    std::string err;

    bool ok() const { return exit_code == 0 && !timed_out; }
};

// Runs `command` through /bin/sh -c, capturing stdout and stderr. A
// non-positive timeout means no limit; on expiry the process group is
// killed and timed_out is set.
CommandResult run_command(const std::string& command, double timeout_seconds = 0.0);

// Shell-quotes one argument for interpolation into a command line.
std::string shell_quote(const std::string& arg);

}  // namespace ocrpost
