#pragma once

#include <string>
#include <vector>

namespace wilcfar::cli {

// Full command-line entry point; returns the process exit code
// (0 success, 2 usage error, 1 runtime error).
int run(int argc, const char* const* argv);
int run(std::vector<std::string> args);

}  // namespace wilcfar::cli
