#pragma once

#include <string>
#include <vector>

namespace relsim {

// Command-line front end (subcommands `run` and `sweep`). `args` excludes the
// program name. Returns the process exit status: 0 on success, nonzero with a
// diagnostic on stderr otherwise.
int run_cli(std::vector<std::string> args);

}  // namespace relsim
