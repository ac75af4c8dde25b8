#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace contractcheck::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInvalidInput = 2,
    kExplosion = 3,
    kNoTerminal = 4,
    kEndpoint = 5,
};

/// Entry point behind the `contractcheck` binary. `args` excludes the
/// program name. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace contractcheck::cli
