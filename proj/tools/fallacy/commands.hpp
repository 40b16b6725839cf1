#pragma once

#include <iosfwd>

namespace fallacy::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitDataError = 1,
    kExitConfigError = 2,
    kExitBackendExhausted = 3,
};

/// Entry point of the `fallacy` tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fallacy::cli
