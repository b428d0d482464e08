#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracdrift::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,  ///< bad config, refused gate, I/O failure
  kExitNonConvergence = 2,
  kExitDivergence = 3,
  kExitBlowUp = 4,
  kExitNotStationary = 5,  ///< --check-stationary drift above the threshold
};

/// Relative drift accepted by evolve --check-stationary.
inline constexpr double kStationarityThreshold = 1e-6;

/// Runs one command. `args` is a full argv, program name first.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracdrift::cli
