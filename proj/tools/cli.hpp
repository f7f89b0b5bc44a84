#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "pisim/linalg.hpp"

namespace pisim::cli {

enum ExitCode : int {
  kTrue = 0,       ///< verdict true, verification passed, suite passed
  kFalse = 1,      ///< verdict false, verification failed, not admissible
  kParse = 2,      ///< unreadable or malformed input
  kNumerical = 3,  ///< cluster ambiguity or numerical failure
};

struct RunConfig {
  Tolerances tolerances;
  std::uint64_t seed = 42;
  std::optional<std::string> output_path;
};

/// Entry point of the `pisim` tool. Results go to `out` (or the --out file),
/// diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pisim::cli
