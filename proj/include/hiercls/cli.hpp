#pragma once

#include <string>
#include <vector>

namespace hiercls {

// Full command-line entry point (argv[0] excluded). Returns the process
// exit code: 0 ok, 2 usage/config, 3 data, 4 internal.
int run_cli(const std::vector<std::string>& args);

}  // namespace hiercls
