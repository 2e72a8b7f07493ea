#pragma once

#include <stdexcept>
#include <string>

namespace blocktrid {

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch,
  NonFinite,
  Parse,
  Io,
  Schedule,
  Numeric,
  Internal,
};

/// Exception type thrown by every core routine. The C API maps `code()` onto
/// its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blocktrid
