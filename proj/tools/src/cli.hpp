#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sptnoise::cli {

// Runs the tool on `args` (without the program name). Returns the process
// exit code: 0 success, 2 validation error, 3 numerical-consistency error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sptnoise::cli
