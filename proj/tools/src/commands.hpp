#pragma once

#include <string>
#include <vector>

namespace nlspec::cli {

enum ExitCode : int { kPass = 0, kConfigError = 1, kNumericalFailure = 2, kVerificationFailure = 3 };

// Environment variable that overrides the configured output directory (--out still wins).
inline constexpr const char* kOutDirEnv = "NLSPEC_OUT_DIR";

// Parses arguments, runs one subcommand, and returns the process exit code.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace nlspec::cli
