#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rig::cli {

inline constexpr const char* kToolVersion = "rig 1.0.0";

enum ExitCode : int {
  kOk = 0,
  kFalseVerdict = 1,
  kInputError = 2,
  kResourceCap = 3,
  kInternalError = 4,
};

/// Runs one command line (without the program name). Machine output goes to `out` as JSON,
/// human summaries and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace rig::cli
