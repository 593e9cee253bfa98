#pragma once

#include <string>
#include <vector>

#include "stoqkit/io.hpp"

namespace stoqkit::cli {

enum ExitCode : int {
  kExitOk = 0,  // success or YES
  kExitNo = 1,
  kExitError = 2,
  kExitAmbiguous = 3,
};

struct CommandResult {
  int exit_code = kExitOk;
  io::Json report;   // ReportFile payload; empty for --help
  std::string csv;   // gap-scan only
  std::string text;  // help or error message
};

// args excludes the program name.
CommandResult run_command(const std::vector<std::string>& args);

}  // namespace stoqkit::cli
