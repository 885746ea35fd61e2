#pragma once

#include <string>
#include <vector>

namespace rmts::cli {

// Runs the command line given argv-style arguments (without the program
// name). Exit code: 0 success, 1 configuration or input error, 2 numerical
// or divergence error.
int run(const std::vector<std::string>& args);

} // namespace rmts::cli
