// cli.hpp: `qbat run` and `qbat validate`.
#pragma once

#include <ostream>

#include "qbat/config.hpp"

namespace qbat::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,        // I/O and other unexpected errors
    kInvalidConfig = 2,
    kIntegratorAbort = 3,
};

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qbat::cli
