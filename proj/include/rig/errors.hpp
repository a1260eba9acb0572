#pragma once

#include <stdexcept>
#include <string>

namespace rig {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad schema, unknown symbol, invalid parameter. `path` locates the field.
class InputError : public Error {
 public:
  explicit InputError(const std::string& message, std::string path = {})
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A configurable cap (universe size, enumeration size, grid) was exceeded.
class ResourceCapError : public Error {
 public:
  using Error::Error;
};

/// A validator rejected the instance; the solver refuses to run on it.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A proved invariant failed at runtime. Always a bug in this library.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Requested a winning strategy where the initial abstract state is not winning.
class NotWinningError : public Error {
 public:
  using Error::Error;
};

}  // namespace rig
