#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coiso {

// Dispatches one command line (without the program name) and writes results
// to the given streams.  Returns the process exit code: 0 success, 1 bad
// input, 2 violated internal identity, 64 unknown or missing subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coiso
