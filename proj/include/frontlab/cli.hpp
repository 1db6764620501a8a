// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>

#include "frontlab/config.hpp"

namespace frontlab {

// Runs one command and writes its artifacts into out_dir (created if needed).  Throws Error.
void execute(Command cmd, const RunConfig& c, const std::string& out_dir, std::ostream* progress = nullptr);

// execute() with errors mapped to exit codes and messages on err.
int dispatch(Command cmd, const RunConfig& c, const std::string& out_dir, std::ostream& err,
             bool verbose = false);

// Full command line: frontlab <command> --config <path> --out <dir> [--verbose]
int run_cli(int argc, char** argv);

}  // namespace frontlab
