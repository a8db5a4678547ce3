#pragma once

#include <string>
#include <vector>

namespace fht {

// Full command-line entry point; returns the process exit code.
// Exposed as a library function so tests can drive commands in-process.
int run_cli(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

}  // namespace fht
