#pragma once

#include <ostream>

namespace tskan::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDataError = 3,
  kTrainingError = 4,
  kIoError = 5,
};

/// Parses `tskan <command> [options]`, runs the command and maps failures to
/// exit codes. Messages go to `err`, tables and summaries to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tskan::cli
