#pragma once

#include <string>
#include <vector>

#include "timelens/config.hpp"

namespace timelens {

enum ExitStatus : int {
  kExitOk = 0,
  kExitError = 1,
  kExitUsage = 2,
  kExitCheckFailed = 3,
};

struct RunResult {
  std::string content;  // file body (CSV or JSON)
  int status = kExitOk;
  std::string message;  // one-line summary for stderr
};

const std::vector<std::string>& command_names();

/// Executes one command.  Errors from the library propagate as
/// timelens::Error; failed checks (oracle tolerance, time invariance under
/// output.strict) are reported through the status.
RunResult run(const std::string& command, const RunConfig& cfg);

}  // namespace timelens
