#pragma once

#include <string>

#include "eitlab/app/config.hpp"

namespace eitlab::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitWrapHazard = 4,
};

/// Executes the scenario and writes CSV tables plus summary.json into
/// out_dir. Library errors propagate as exceptions.
void execute(const RunConfig& config, const std::string& out_dir);

/// execute() with errors mapped to exit codes; messages go to stderr.
int run(const RunConfig& config, const std::string& out_dir);

}  // namespace eitlab::app
