#pragma once

#include <stdexcept>
#include <string>

namespace hiercls {

// Exit codes used by the CLI. Library code throws the matching exception
// type; main() translates.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,     // bad flags, bad config, unresolvable paths
  kExitData = 3,      // malformed or inconsistent input data
  kExitInternal = 4,  // bugs, non-finite losses, broken invariants
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Model file problems are data errors, but callers need to tell the
// failure modes apart.
struct ModelFileError : DataError {
  explicit ModelFileError(const std::string& msg) : DataError(msg) {}
};

struct ModelVersionError : ModelFileError {
  explicit ModelVersionError(const std::string& msg) : ModelFileError(msg) {}
};

struct ModelTruncatedError : ModelFileError {
  explicit ModelTruncatedError(const std::string& msg) : ModelFileError(msg) {}
};

struct ModelChecksumError : ModelFileError {
  explicit ModelChecksumError(const std::string& msg) : ModelFileError(msg) {}
};

}  // namespace hiercls
