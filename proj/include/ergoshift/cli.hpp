#pragma once

#include <ostream>

#include "ergoshift/config.hpp"

namespace ergoshift {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitViolation = 4;

struct Artifact {
  /// "csv" or "json".
  std::string extension;
  std::string text;
  int exit_code = kExitOk;
};

/// Runs a validated config. Throws the library's errors.
Artifact execute(const ExperimentConfig& config);

/// Entry point of the `ergoshift` tool. Results go to `out` (or to files under
/// the config's output prefix), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergoshift
