#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace finex {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitData = 3,
  kExitContract = 4,
};

/// Entry point of the `finex` command line tool. argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finex
