#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace momentforge {

// Runs one CLI invocation (argv without the program name). Returns the exit
// code: 0 success, 1 analysis rejection or failure (with a witness on
// stderr/JSON), 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace momentforge
